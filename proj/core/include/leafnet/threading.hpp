#pragma once

#include <cstdint>

namespace leafnet {

// Number of worker threads used by parallel_for. 0 = hardware default.
void set_num_threads(int n);
int num_threads();

// Runs fn(i) for i in [begin, end). Iterations must be independent: each
// writes only its own output slice and performs any reduction over its
// own inputs in a fixed serial order. Under that contract results are
// bit-identical for every thread count, including 1. Nested calls run
// serially.
template <typename Fn>
void parallel_for(int64_t begin, int64_t end, Fn&& fn);

namespace detail {
bool in_parallel_region();
void run_parallel(int64_t begin, int64_t end, void (*trampoline)(void*, int64_t),
                  void* ctx);
}  // namespace detail

template <typename Fn>
void parallel_for(int64_t begin, int64_t end, Fn&& fn) {
  if (end <= begin) return;
  if (detail::in_parallel_region() || num_threads() == 1 || end - begin == 1) {
    for (int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  auto trampoline = [](void* ctx, int64_t i) { (*static_cast<Fn*>(ctx))(i); };
  detail::run_parallel(begin, end, trampoline, &fn);
}

}  // namespace leafnet
