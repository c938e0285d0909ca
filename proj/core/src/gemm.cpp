#include "leafnet/gemm.hpp"

#include <algorithm>
#include <cstring>

#include "leafnet/threading.hpp"

namespace leafnet {
namespace {

constexpr int64_t kRowBlock = 4;    // A rows processed together
constexpr int64_t kColTile = 512;   // C columns kept hot in L1

// One row-block strip of gemm_nn: C[i0..i1) = A[i0..i1) * B. The k loop
// broadcasts A entries and streams B rows, which vectorizes to FMA over j.
// Accumulation order over k is ascending for every C element regardless of
// how strips are scheduled.
void gemm_nn_strip(int64_t i0, int64_t i1, int64_t n, int64_t k, const float* a,
                   const float* b, float* c) {
  for (int64_t jt = 0; jt < n; jt += kColTile) {
    const int64_t je = std::min(n, jt + kColTile);
    for (int64_t i = i0; i < i1; i += kRowBlock) {
      const int64_t ie = std::min(i1, i + kRowBlock);
      for (int64_t r = i; r < ie; ++r) std::memset(c + r * n + jt, 0, (je - jt) * sizeof(float));
      if (ie - i == kRowBlock) {
        float* __restrict c0 = c + (i + 0) * n;
        float* __restrict c1 = c + (i + 1) * n;
        float* __restrict c2 = c + (i + 2) * n;
        float* __restrict c3 = c + (i + 3) * n;
        for (int64_t p = 0; p < k; ++p) {
          const float a0 = a[(i + 0) * k + p];
          const float a1 = a[(i + 1) * k + p];
          const float a2 = a[(i + 2) * k + p];
          const float a3 = a[(i + 3) * k + p];
          const float* __restrict bp = b + p * n;
          for (int64_t j = jt; j < je; ++j) {
            const float bv = bp[j];
            c0[j] += a0 * bv;
            c1[j] += a1 * bv;
            c2[j] += a2 * bv;
            c3[j] += a3 * bv;
          }
        }
      } else {
        for (int64_t r = i; r < ie; ++r) {
          float* __restrict cr = c + r * n;
          for (int64_t p = 0; p < k; ++p) {
            const float av = a[r * k + p];
            const float* __restrict bp = b + p * n;
            for (int64_t j = jt; j < je; ++j) cr[j] += av * bp[j];
          }
        }
      }
    }
  }
}

// Same kernel with A addressed transposed (A stored [K x M]).
void gemm_tn_strip(int64_t i0, int64_t i1, int64_t m, int64_t n, int64_t k,
                   const float* a, const float* b, float* c) {
  for (int64_t jt = 0; jt < n; jt += kColTile) {
    const int64_t je = std::min(n, jt + kColTile);
    for (int64_t i = i0; i < i1; i += kRowBlock) {
      const int64_t ie = std::min(i1, i + kRowBlock);
      for (int64_t r = i; r < ie; ++r) std::memset(c + r * n + jt, 0, (je - jt) * sizeof(float));
      if (ie - i == kRowBlock) {
        float* __restrict c0 = c + (i + 0) * n;
        float* __restrict c1 = c + (i + 1) * n;
        float* __restrict c2 = c + (i + 2) * n;
        float* __restrict c3 = c + (i + 3) * n;
        for (int64_t p = 0; p < k; ++p) {
          const float* ap = a + p * m + i;
          const float a0 = ap[0], a1 = ap[1], a2 = ap[2], a3 = ap[3];
          const float* __restrict bp = b + p * n;
          for (int64_t j = jt; j < je; ++j) {
            const float bv = bp[j];
            c0[j] += a0 * bv;
            c1[j] += a1 * bv;
            c2[j] += a2 * bv;
            c3[j] += a3 * bv;
          }
        }
      } else {
        for (int64_t r = i; r < ie; ++r) {
          float* __restrict cr = c + r * n;
          for (int64_t p = 0; p < k; ++p) {
            const float av = a[p * m + r];
            const float* __restrict bp = b + p * n;
            for (int64_t j = jt; j < je; ++j) cr[j] += av * bp[j];
          }
        }
      }
    }
  }
}

}  // namespace

void gemm_nn(int64_t m, int64_t n, int64_t k, const float* a, const float* b,
             float* c) {
  const int64_t strips = (m + kRowBlock - 1) / kRowBlock;
  parallel_for(0, strips, [&](int64_t s) {
    const int64_t i0 = s * kRowBlock;
    gemm_nn_strip(i0, std::min(m, i0 + kRowBlock), n, k, a, b, c);
  });
}

void gemm_tn(int64_t m, int64_t n, int64_t k, const float* a, const float* b,
             float* c) {
  const int64_t strips = (m + kRowBlock - 1) / kRowBlock;
  parallel_for(0, strips, [&](int64_t s) {
    const int64_t i0 = s * kRowBlock;
    gemm_tn_strip(i0, std::min(m, i0 + kRowBlock), m, n, k, a, b, c);
  });
}

void gemm_nt(int64_t m, int64_t n, int64_t k, const float* a, const float* b,
             float* c) {
  // C[i][j] = dot(A row i, B row j); four fixed-order partial sums per
  // element keep the reduction order independent of scheduling.
  parallel_for(0, m, [&](int64_t i) {
    const float* __restrict ai = a + i * k;
    float* __restrict ci = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const float* __restrict bj = b + j * k;
      float s0 = 0.0f, s1 = 0.0f, s2 = 0.0f, s3 = 0.0f;
      int64_t p = 0;
      for (; p + 4 <= k; p += 4) {
        s0 += ai[p + 0] * bj[p + 0];
        s1 += ai[p + 1] * bj[p + 1];
        s2 += ai[p + 2] * bj[p + 2];
        s3 += ai[p + 3] * bj[p + 3];
      }
      float s = ((s0 + s1) + (s2 + s3));
      for (; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = s;
    }
  });
}

}  // namespace leafnet
