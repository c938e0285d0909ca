#pragma once

#include <span>
#include <vector>

#include "leafnet/tensor.hpp"

namespace leafnet {

enum class Padding { Valid, Same };

// Per-axis padding split for a kernel extent. "Same" pads k-1 in total,
// floor((k-1)/2) before and ceil((k-1)/2) after, so output extent is
// ceil(in/stride) for any kernel parity.
struct PadSpec {
  int64_t begin = 0, end = 0;
};
PadSpec pad_for(Padding padding, int64_t kernel);

// floor((in + padTotal - kernel)/stride) + 1
int64_t conv_out_extent(int64_t in, int64_t kernel, int64_t stride,
                        Padding padding);

Shape4 conv2d_output_shape(const Shape4& input, const Shape4& weights,
                           int64_t stride, Padding padding);

// Rearranges conv windows of one image (C,H,W) into a [C*kH*kW x outH*outW]
// row-major matrix; out-of-bounds positions contribute zero.
void im2col(const float* image, int64_t channels, int64_t height, int64_t width,
            int64_t kh, int64_t kw, int64_t stride, Padding padding,
            float* cols);

// Scatter-add inverse of im2col. With non-overlapping windows and no
// padding it reconstructs the image exactly.
void col2im(const float* cols, int64_t channels, int64_t height, int64_t width,
            int64_t kh, int64_t kw, int64_t stride, Padding padding,
            float* image);

// weights are (outC, inC, kH, kW); bias may be empty for a bias-free conv.
Tensor conv2d_forward(const Tensor& input, const Tensor& weights,
                      std::span<const float> bias, int64_t stride,
                      Padding padding);

struct Conv2dGrads {
  Tensor input;
  Tensor weights;
  std::vector<float> bias;  // empty when the forward pass had no bias
};

Conv2dGrads conv2d_backward(const Tensor& input, const Tensor& weights,
                            bool has_bias, const Tensor& output_grad,
                            int64_t stride, Padding padding);

}  // namespace leafnet
