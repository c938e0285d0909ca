#pragma once

#include <cstdint>

namespace leafnet {

// Single-precision matrix products over row-major buffers. Every output
// element is a dot product accumulated in one fixed order, so results are
// bit-identical whether the row blocks run on 1 thread or many.

// C[M x N] = A[M x K] * B[K x N]
void gemm_nn(int64_t m, int64_t n, int64_t k, const float* a, const float* b,
             float* c);

// C[M x N] = A^T * B where A is stored [K x M]
void gemm_tn(int64_t m, int64_t n, int64_t k, const float* a, const float* b,
             float* c);

// C[M x N] = A * B^T where B is stored [N x K]
void gemm_nt(int64_t m, int64_t n, int64_t k, const float* a, const float* b,
             float* c);

}  // namespace leafnet
