#include "leafnet/threading.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <thread>

namespace leafnet {

namespace {
std::atomic<int> g_threads{0};

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}
}  // namespace

void set_num_threads(int n) { g_threads.store(std::max(0, n)); }

int num_threads() {
  int n = g_threads.load();
  return n == 0 ? hardware_threads() : n;
}

namespace detail {

bool in_parallel_region() { return omp_in_parallel() != 0; }

void run_parallel(int64_t begin, int64_t end, void (*trampoline)(void*, int64_t),
                  void* ctx) {
  const int nt = std::min<int64_t>(num_threads(), end - begin);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int64_t i = begin; i < end; ++i) {
    trampoline(ctx, i);
  }
}

}  // namespace detail
}  // namespace leafnet
