#pragma once

#include <span>
#include <vector>

#include "leafnet/tensor.hpp"

namespace leafnet {

inline constexpr float kBnEps = 1e-5f;
inline constexpr float kBnMomentum = 0.9f;

// Batch statistics captured by the training forward pass, needed to run
// the matching backward pass.
struct BnCache {
  std::vector<float> mean;     // per channel
  std::vector<float> inv_std;  // 1/sqrt(var + eps), per channel
};

// Normalizes each channel over N*H*W with biased (population) variance and
// folds the batch statistics into the running ones:
//   running <- momentum * running + (1 - momentum) * batch
Tensor batchnorm_forward_train(const Tensor& input, std::span<const float> gamma,
                               std::span<const float> beta,
                               std::span<float> running_mean,
                               std::span<float> running_var, float eps,
                               float momentum, BnCache& cache);

Tensor batchnorm_forward_infer(const Tensor& input, std::span<const float> gamma,
                               std::span<const float> beta,
                               std::span<const float> running_mean,
                               std::span<const float> running_var, float eps);

struct BnGrads {
  Tensor input;
  std::vector<float> gamma;
  std::vector<float> beta;
};

BnGrads batchnorm_backward(const Tensor& input, const BnCache& cache,
                           std::span<const float> gamma,
                           const Tensor& output_grad);

}  // namespace leafnet
