#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace leafnet {

// Seedable 64-bit generator (splitmix64: one additive constant, two
// xor-shift-multiply rounds). The same seed yields the same variate
// sequence on every platform; all shuffles, weight draws and dropout
// masks in this library go through it.
class Prng {
public:
  explicit Prng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 24-bit resolution (exact in float).
  float next_uniform() {
    return static_cast<float>(next_u64() >> 40) * 0x1p-24f;
  }

  // Uniform integer in [0, n) via 128-bit multiply-shift.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  float next_gaussian() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    double u2 = static_cast<double>(next_u64() >> 11) * 0x1p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return static_cast<float>(r * std::cos(2.0 * std::numbers::pi * u2));
  }

  uint64_t state() const { return state_; }

private:
  uint64_t state_;
};

// Stable mix of a base seed with stream labels, for deriving independent
// substreams (per-class shuffles, per-epoch orders, per-sample augments).
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  Prng p(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
  return p.next_u64();
}

}  // namespace leafnet
