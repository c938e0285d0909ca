#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "leafnet/prng.hpp"

namespace leafnet {

// Dimensions of a rank-4 tensor in N,C,H,W order.
struct Shape4 {
  int64_t n = 0, c = 0, h = 0, w = 0;

  int64_t numel() const { return n * c * h * w; }
  bool operator==(const Shape4&) const = default;
  std::string str() const;
};

// Dense rank-4 float tensor, row-major N,C,H,W. `grad`, when allocated,
// mirrors `values` element for element. Vectors and matrices ride along
// as (len,1,1,1) and (rows,cols,1,1).
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(Shape4 shape) : shape_(shape), values_(shape.numel(), 0.0f) {}
  Tensor(Shape4 shape, std::vector<float> values);

  static Tensor zeros(Shape4 shape) { return Tensor(shape); }
  static Tensor full(Shape4 shape, float v);
  static Tensor randn(Shape4 shape, Prng& rng, float stddev = 1.0f);

  const Shape4& shape() const { return shape_; }
  int64_t numel() const { return shape_.numel(); }

  float* data() { return values_.data(); }
  const float* data() const { return values_.data(); }
  std::vector<float>& values() { return values_; }
  const std::vector<float>& values() const { return values_; }

  float& at(int64_t n, int64_t c, int64_t h, int64_t w) {
    return values_[index(n, c, h, w)];
  }
  float at(int64_t n, int64_t c, int64_t h, int64_t w) const {
    return values_[index(n, c, h, w)];
  }
  int64_t index(int64_t n, int64_t c, int64_t h, int64_t w) const {
    return ((n * shape_.c + c) * shape_.h + h) * shape_.w + w;
  }

  bool has_grad() const { return !grad_.empty(); }
  void alloc_grad();
  void zero_grad();
  std::vector<float>& grad() { return grad_; }
  const std::vector<float>& grad() const { return grad_; }

  // Same values, new dimensions; element count must be preserved.
  Tensor reshaped(Shape4 shape) const;

  bool all_finite() const;

private:
  Shape4 shape_;
  std::vector<float> values_;
  std::vector<float> grad_;
};

// Throws ShapeError unless both shapes match, naming the first
// offending axis.
void check_same_shape(const Shape4& a, const Shape4& b, const char* what);

}  // namespace leafnet
