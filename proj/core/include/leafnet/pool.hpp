#pragma once

#include <cstdint>
#include <vector>

#include "leafnet/tensor.hpp"

namespace leafnet {

struct MaxPoolResult {
  Tensor output;
  // Per output element, the (h*W + w) plane offset of the winning input.
  // Ties go to the lowest offset in scan order.
  std::vector<uint32_t> argmax;
};

// No padding; output extent = floor((in - window)/stride) + 1.
MaxPoolResult maxpool2d_forward(const Tensor& input, int64_t window,
                                int64_t stride);

// Routes each output gradient to its recorded argmax position only, so the
// routed mass equals the incoming mass exactly.
Tensor maxpool2d_backward(const Shape4& input_shape,
                          const std::vector<uint32_t>& argmax,
                          const Tensor& output_grad, int64_t window,
                          int64_t stride);

}  // namespace leafnet
