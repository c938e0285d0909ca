#include "leafnet/batchnorm.hpp"

#include <cmath>
#include <string>

#include "leafnet/errors.hpp"
#include "leafnet/threading.hpp"

namespace leafnet {

namespace {
void check_param_lengths(const Shape4& in, size_t gamma, size_t beta) {
  if (static_cast<int64_t>(gamma) != in.c ||
      static_cast<int64_t>(beta) != in.c) {
    throw ShapeError("batchnorm2d: gamma/beta length must equal channel count " +
                     std::to_string(in.c));
  }
}
}  // namespace

Tensor batchnorm_forward_train(const Tensor& input, std::span<const float> gamma,
                               std::span<const float> beta,
                               std::span<float> running_mean,
                               std::span<float> running_var, float eps,
                               float momentum, BnCache& cache) {
  const Shape4 in = input.shape();
  check_param_lengths(in, gamma.size(), beta.size());
  if (eps <= 0) throw ParamError("batchnorm2d: eps must be > 0");
  if (in.n == 0) throw ParamError("batchnorm2d: empty batch in train mode");

  const int64_t plane = in.h * in.w;
  const int64_t per_channel = in.n * plane;
  cache.mean.assign(in.c, 0.0f);
  cache.inv_std.assign(in.c, 0.0f);

  Tensor output(in);
  parallel_for(0, in.c, [&](int64_t c) {
    double sum = 0.0;
    for (int64_t n = 0; n < in.n; ++n) {
      const float* p = input.data() + (n * in.c + c) * plane;
      for (int64_t i = 0; i < plane; ++i) sum += p[i];
    }
    const float mean = static_cast<float>(sum / per_channel);

    double sq = 0.0;
    for (int64_t n = 0; n < in.n; ++n) {
      const float* p = input.data() + (n * in.c + c) * plane;
      for (int64_t i = 0; i < plane; ++i) {
        const double d = p[i] - mean;
        sq += d * d;
      }
    }
    const float var = static_cast<float>(sq / per_channel);
    const float inv_std = 1.0f / std::sqrt(var + eps);
    cache.mean[c] = mean;
    cache.inv_std[c] = inv_std;
    running_mean[c] = momentum * running_mean[c] + (1.0f - momentum) * mean;
    running_var[c] = momentum * running_var[c] + (1.0f - momentum) * var;

    const float g = gamma[c], b = beta[c];
    for (int64_t n = 0; n < in.n; ++n) {
      const float* p = input.data() + (n * in.c + c) * plane;
      float* q = output.data() + (n * in.c + c) * plane;
      for (int64_t i = 0; i < plane; ++i)
        q[i] = g * (p[i] - mean) * inv_std + b;
    }
  });
  return output;
}

Tensor batchnorm_forward_infer(const Tensor& input, std::span<const float> gamma,
                               std::span<const float> beta,
                               std::span<const float> running_mean,
                               std::span<const float> running_var, float eps) {
  const Shape4 in = input.shape();
  check_param_lengths(in, gamma.size(), beta.size());
  const int64_t plane = in.h * in.w;

  Tensor output(in);
  parallel_for(0, in.n * in.c, [&](int64_t nc) {
    const int64_t c = nc % in.c;
    const float scale = gamma[c] / std::sqrt(running_var[c] + eps);
    const float shift = beta[c] - running_mean[c] * scale;
    const float* p = input.data() + nc * plane;
    float* q = output.data() + nc * plane;
    for (int64_t i = 0; i < plane; ++i) q[i] = p[i] * scale + shift;
  });
  return output;
}

BnGrads batchnorm_backward(const Tensor& input, const BnCache& cache,
                           std::span<const float> gamma,
                           const Tensor& output_grad) {
  const Shape4 in = input.shape();
  check_same_shape(output_grad.shape(), in, "batchnorm2d backward");
  const int64_t plane = in.h * in.w;
  const int64_t m = in.n * plane;

  BnGrads grads{Tensor(in), std::vector<float>(in.c, 0.0f),
                std::vector<float>(in.c, 0.0f)};

  parallel_for(0, in.c, [&](int64_t c) {
    const float mean = cache.mean[c];
    const float inv_std = cache.inv_std[c];
    const float g = gamma[c];

    // dgamma = sum(dy * xhat), dbeta = sum(dy); the same sums feed dx.
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int64_t n = 0; n < in.n; ++n) {
      const float* x = input.data() + (n * in.c + c) * plane;
      const float* dy = output_grad.data() + (n * in.c + c) * plane;
      for (int64_t i = 0; i < plane; ++i) {
        const float xhat = (x[i] - mean) * inv_std;
        sum_dy += dy[i];
        sum_dy_xhat += dy[i] * xhat;
      }
    }
    grads.beta[c] = static_cast<float>(sum_dy);
    grads.gamma[c] = static_cast<float>(sum_dy_xhat);

    const float k1 = static_cast<float>(sum_dy / m);
    const float k2 = static_cast<float>(sum_dy_xhat / m);
    const float scale = g * inv_std;
    for (int64_t n = 0; n < in.n; ++n) {
      const float* x = input.data() + (n * in.c + c) * plane;
      const float* dy = output_grad.data() + (n * in.c + c) * plane;
      float* dx = grads.input.data() + (n * in.c + c) * plane;
      for (int64_t i = 0; i < plane; ++i) {
        const float xhat = (x[i] - mean) * inv_std;
        dx[i] = scale * (dy[i] - k1 - xhat * k2);
      }
    }
  });
  return grads;
}

}  // namespace leafnet
