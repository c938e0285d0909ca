#pragma once

#include <span>

#include "leafnet/tensor.hpp"

namespace leafnet {

struct SoftmaxXentResult {
  double loss = 0.0;   // mean negative log-probability of the true classes
  Tensor probs;        // (N,K,1,1), rows sum to 1
  Tensor logit_grads;  // (probs - onehot) / N
};

// Row-stable softmax (max subtraction) fused with cross-entropy.
SoftmaxXentResult softmax_cross_entropy(const Tensor& logits,
                                        std::span<const int> labels);

// Softmax probabilities only, for inference.
Tensor softmax(const Tensor& logits);

}  // namespace leafnet
