#pragma once

#include <span>
#include <vector>

#include "leafnet/prng.hpp"
#include "leafnet/tensor.hpp"

namespace leafnet {

// input (N,F,1,1) x weights (F,U,1,1) + bias -> (N,U,1,1)
Tensor dense_forward(const Tensor& input, const Tensor& weights,
                     std::span<const float> bias);

struct DenseGrads {
  Tensor input;
  Tensor weights;
  std::vector<float> bias;
};
DenseGrads dense_backward(const Tensor& input, const Tensor& weights,
                          const Tensor& output_grad);

Tensor relu_forward(const Tensor& input);
// Gates output gradients by the sign of the forward input (zero at zero).
Tensor relu_backward(const Tensor& input, const Tensor& output_grad);

// Pure reshape to (N, C*H*W, 1, 1); values are bit-identical.
Tensor flatten(const Tensor& input);

struct DropoutResult {
  Tensor output;
  std::vector<uint8_t> keep;  // 1 = unit survived
};

// Inverted dropout: each unit is zeroed with probability `rate`, survivors
// scale by 1/(1-rate) so inference is an identity. The mask is drawn from
// the rng in element order.
DropoutResult dropout_forward_train(const Tensor& input, float rate, Prng& rng);

Tensor dropout_backward(const std::vector<uint8_t>& keep, float rate,
                        const Tensor& output_grad);

}  // namespace leafnet
