#include "leafnet/tensor.hpp"

#include <cmath>
#include <sstream>

#include "leafnet/errors.hpp"

namespace leafnet {

std::string Shape4::str() const {
  std::ostringstream os;
  os << "(" << n << "," << c << "," << h << "," << w << ")";
  return os.str();
}

Tensor::Tensor(Shape4 shape, std::vector<float> values)
    : shape_(shape), values_(std::move(values)) {
  if (static_cast<int64_t>(values_.size()) != shape_.numel()) {
    throw ShapeError("tensor value count " + std::to_string(values_.size()) +
                     " does not match shape " + shape_.str());
  }
}

Tensor Tensor::full(Shape4 shape, float v) {
  Tensor t(shape);
  std::fill(t.values_.begin(), t.values_.end(), v);
  return t;
}

Tensor Tensor::randn(Shape4 shape, Prng& rng, float stddev) {
  Tensor t(shape);
  for (auto& v : t.values_) v = rng.next_gaussian() * stddev;
  return t;
}

void Tensor::alloc_grad() { grad_.assign(values_.size(), 0.0f); }

void Tensor::zero_grad() {
  if (grad_.empty())
    alloc_grad();
  else
    std::fill(grad_.begin(), grad_.end(), 0.0f);
}

Tensor Tensor::reshaped(Shape4 shape) const {
  if (shape.numel() != shape_.numel()) {
    throw ShapeError("reshape " + shape_.str() + " -> " + shape.str() +
                     " changes element count");
  }
  return Tensor(shape, values_);
}

bool Tensor::all_finite() const {
  for (float v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void check_same_shape(const Shape4& a, const Shape4& b, const char* what) {
  if (a == b) return;
  const char* axis = a.n != b.n   ? "N"
                     : a.c != b.c ? "C"
                     : a.h != b.h ? "H"
                                  : "W";
  throw ShapeError(std::string(what) + ": shape mismatch on axis " + axis +
                   ", " + a.str() + " vs " + b.str());
}

}  // namespace leafnet
