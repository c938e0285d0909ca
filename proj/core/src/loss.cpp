#include "leafnet/loss.hpp"

#include <cmath>
#include <string>

#include "leafnet/errors.hpp"

namespace leafnet {

namespace {
void check_logits(const Shape4& s, size_t labels) {
  if (s.h != 1 || s.w != 1)
    throw ShapeError("softmax_cross_entropy: logits must be (N,K,1,1), got " +
                     s.str());
  if (s.c < 1) throw ParamError("softmax_cross_entropy: K must be >= 1");
  if (labels != 0 && static_cast<int64_t>(labels) != s.n)
    throw ParamError("softmax_cross_entropy: label count " +
                     std::to_string(labels) + " != batch size " +
                     std::to_string(s.n));
}

void softmax_row(const float* row, int64_t k, float* out) {
  float mx = row[0];
  for (int64_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
  double sum = 0.0;
  for (int64_t j = 0; j < k; ++j) {
    out[j] = std::exp(row[j] - mx);
    sum += out[j];
  }
  const float inv = static_cast<float>(1.0 / sum);
  for (int64_t j = 0; j < k; ++j) out[j] *= inv;
}
}  // namespace

SoftmaxXentResult softmax_cross_entropy(const Tensor& logits,
                                        std::span<const int> labels) {
  const Shape4 s = logits.shape();
  check_logits(s, labels.size());
  const int64_t n = s.n, k = s.c;

  SoftmaxXentResult result;
  result.probs = Tensor(s);
  result.logit_grads = Tensor(s);

  double total = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const int label = labels[i];
    if (label < 0 || label >= k) {
      throw ParamError("softmax_cross_entropy: label " + std::to_string(label) +
                       " out of range [0," + std::to_string(k) + ") at row " +
                       std::to_string(i));
    }
    const float* row = logits.data() + i * k;
    float* p = result.probs.data() + i * k;
    softmax_row(row, k, p);

    // log p computed from the shifted logits directly, so a dominant true
    // logit gives loss ~0 instead of log(0underflow).
    float mx = row[0];
    for (int64_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (int64_t j = 0; j < k; ++j) sum += std::exp(row[j] - mx);
    total += -(static_cast<double>(row[label]) - mx - std::log(sum));

    float* g = result.logit_grads.data() + i * k;
    const float inv_n = 1.0f / static_cast<float>(n);
    for (int64_t j = 0; j < k; ++j) g[j] = p[j] * inv_n;
    g[label] -= inv_n;
  }
  result.loss = total / static_cast<double>(n);
  return result;
}

Tensor softmax(const Tensor& logits) {
  const Shape4 s = logits.shape();
  check_logits(s, 0);
  Tensor probs(s);
  for (int64_t i = 0; i < s.n; ++i)
    softmax_row(logits.data() + i * s.c, s.c, probs.data() + i * s.c);
  return probs;
}

}  // namespace leafnet
