#include "leafnet/dense.hpp"

#include <algorithm>
#include <string>

#include "leafnet/errors.hpp"
#include "leafnet/gemm.hpp"
#include "leafnet/threading.hpp"

namespace leafnet {

namespace {
void check_dense_shapes(const Shape4& in, const Shape4& w,
                        std::span<const float> bias) {
  if (in.h != 1 || in.w != 1)
    throw ShapeError("dense: input must be (N,F,1,1), got " + in.str());
  if (in.c != w.n) {
    throw ShapeError("dense: axis F mismatch, input has " +
                     std::to_string(in.c) + " features but weights expect " +
                     std::to_string(w.n));
  }
  if (!bias.empty() && static_cast<int64_t>(bias.size()) != w.c)
    throw ShapeError("dense: bias length does not match unit count");
}
}  // namespace

Tensor dense_forward(const Tensor& input, const Tensor& weights,
                     std::span<const float> bias) {
  check_dense_shapes(input.shape(), weights.shape(), bias);
  const int64_t n = input.shape().n;
  const int64_t f = input.shape().c;
  const int64_t u = weights.shape().c;

  Tensor output({n, u, 1, 1});
  gemm_nn(n, u, f, input.data(), weights.data(), output.data());
  if (!bias.empty()) {
    parallel_for(0, n, [&](int64_t i) {
      float* row = output.data() + i * u;
      for (int64_t j = 0; j < u; ++j) row[j] += bias[j];
    });
  }
  return output;
}

DenseGrads dense_backward(const Tensor& input, const Tensor& weights,
                          const Tensor& output_grad) {
  check_dense_shapes(input.shape(), weights.shape(), {});
  const int64_t n = input.shape().n;
  const int64_t f = input.shape().c;
  const int64_t u = weights.shape().c;
  check_same_shape(output_grad.shape(), {n, u, 1, 1}, "dense backward");

  DenseGrads grads{Tensor({n, f, 1, 1}), Tensor(weights.shape()),
                   std::vector<float>(u, 0.0f)};
  // dX = dY * W^T, dW = X^T * dY (reduction over the batch, ascending)
  gemm_nt(n, f, u, output_grad.data(), weights.data(), grads.input.data());
  gemm_tn(f, u, n, input.data(), output_grad.data(), grads.weights.data());
  for (int64_t i = 0; i < n; ++i) {
    const float* row = output_grad.data() + i * u;
    for (int64_t j = 0; j < u; ++j) grads.bias[j] += row[j];
  }
  return grads;
}

Tensor relu_forward(const Tensor& input) {
  Tensor output(input.shape());
  const float* x = input.data();
  float* y = output.data();
  const int64_t n = input.numel();
  parallel_for(0, (n + 4095) / 4096, [&](int64_t blk) {
    const int64_t lo = blk * 4096, hi = std::min(n, lo + 4096);
    for (int64_t i = lo; i < hi; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
  });
  return output;
}

Tensor relu_backward(const Tensor& input, const Tensor& output_grad) {
  check_same_shape(input.shape(), output_grad.shape(), "relu backward");
  Tensor input_grad(input.shape());
  const float* x = input.data();
  const float* dy = output_grad.data();
  float* dx = input_grad.data();
  const int64_t n = input.numel();
  parallel_for(0, (n + 4095) / 4096, [&](int64_t blk) {
    const int64_t lo = blk * 4096, hi = std::min(n, lo + 4096);
    for (int64_t i = lo; i < hi; ++i) dx[i] = x[i] > 0.0f ? dy[i] : 0.0f;
  });
  return input_grad;
}

Tensor flatten(const Tensor& input) {
  const Shape4 in = input.shape();
  return input.reshaped({in.n, in.c * in.h * in.w, 1, 1});
}

DropoutResult dropout_forward_train(const Tensor& input, float rate, Prng& rng) {
  if (rate < 0.0f || rate >= 1.0f)
    throw ParamError("dropout: rate must be in [0,1)");
  const int64_t n = input.numel();
  DropoutResult result{Tensor(input.shape()), std::vector<uint8_t>(n, 1)};
  if (rate == 0.0f) {
    result.output = input;
    return result;
  }
  const float scale = 1.0f / (1.0f - rate);
  // Mask draws are a serial rng stream; applying it is elementwise.
  for (int64_t i = 0; i < n; ++i)
    result.keep[i] = rng.next_uniform() >= rate ? 1 : 0;
  const float* x = input.data();
  float* y = result.output.data();
  const uint8_t* keep = result.keep.data();
  parallel_for(0, (n + 4095) / 4096, [&](int64_t blk) {
    const int64_t lo = blk * 4096, hi = std::min(n, lo + 4096);
    for (int64_t i = lo; i < hi; ++i) y[i] = keep[i] ? x[i] * scale : 0.0f;
  });
  return result;
}

Tensor dropout_backward(const std::vector<uint8_t>& keep, float rate,
                        const Tensor& output_grad) {
  if (rate < 0.0f || rate >= 1.0f)
    throw ParamError("dropout: rate must be in [0,1)");
  if (keep.size() != static_cast<size_t>(output_grad.numel()))
    throw ShapeError("dropout backward: mask/gradient size mismatch");
  Tensor input_grad(output_grad.shape());
  const float scale = rate == 0.0f ? 1.0f : 1.0f / (1.0f - rate);
  const float* dy = output_grad.data();
  float* dx = input_grad.data();
  for (int64_t i = 0; i < output_grad.numel(); ++i)
    dx[i] = keep[i] ? dy[i] * scale : 0.0f;
  return input_grad;
}

}  // namespace leafnet
