#include "leafnet/pool.hpp"

#include <string>

#include "leafnet/errors.hpp"
#include "leafnet/threading.hpp"

namespace leafnet {

namespace {
int64_t pool_out_extent(int64_t in, int64_t window, int64_t stride) {
  if (window > in) {
    throw ShapeError("maxpool2d: window " + std::to_string(window) +
                     " exceeds input extent " + std::to_string(in));
  }
  return (in - window) / stride + 1;
}
}  // namespace

MaxPoolResult maxpool2d_forward(const Tensor& input, int64_t window,
                                int64_t stride) {
  if (window < 1 || stride < 1)
    throw ParamError("maxpool2d: window and stride must be >= 1");
  const Shape4 in = input.shape();
  const Shape4 out{in.n, in.c, pool_out_extent(in.h, window, stride),
                   pool_out_extent(in.w, window, stride)};

  MaxPoolResult result{Tensor(out),
                       std::vector<uint32_t>(out.numel(), 0)};
  const int64_t planes = in.n * in.c;
  const int64_t in_plane = in.h * in.w;
  const int64_t out_plane = out.h * out.w;

  parallel_for(0, planes, [&](int64_t p) {
    const float* src = input.data() + p * in_plane;
    float* dst = result.output.data() + p * out_plane;
    uint32_t* arg = result.argmax.data() + p * out_plane;
    for (int64_t oh = 0; oh < out.h; ++oh) {
      for (int64_t ow = 0; ow < out.w; ++ow) {
        const int64_t y0 = oh * stride, x0 = ow * stride;
        float best = src[y0 * in.w + x0];
        int64_t best_at = y0 * in.w + x0;
        for (int64_t i = 0; i < window; ++i) {
          const int64_t row = (y0 + i) * in.w;
          for (int64_t j = 0; j < window; ++j) {
            const float v = src[row + x0 + j];
            if (v > best) {  // strict: first maximum wins on ties
              best = v;
              best_at = row + x0 + j;
            }
          }
        }
        dst[oh * out.w + ow] = best;
        arg[oh * out.w + ow] = static_cast<uint32_t>(best_at);
      }
    }
  });
  return result;
}

Tensor maxpool2d_backward(const Shape4& input_shape,
                          const std::vector<uint32_t>& argmax,
                          const Tensor& output_grad, int64_t window,
                          int64_t stride) {
  const Shape4 out{input_shape.n, input_shape.c,
                   pool_out_extent(input_shape.h, window, stride),
                   pool_out_extent(input_shape.w, window, stride)};
  check_same_shape(output_grad.shape(), out, "maxpool2d backward");

  Tensor input_grad(input_shape);
  const int64_t planes = input_shape.n * input_shape.c;
  const int64_t in_plane = input_shape.h * input_shape.w;
  const int64_t out_plane = out.h * out.w;

  // Overlapping windows can route several outputs to one input slot, so
  // each plane scatters serially; planes are independent.
  parallel_for(0, planes, [&](int64_t p) {
    const float* dout = output_grad.data() + p * out_plane;
    const uint32_t* arg = argmax.data() + p * out_plane;
    float* din = input_grad.data() + p * in_plane;
    for (int64_t i = 0; i < out_plane; ++i) din[arg[i]] += dout[i];
  });
  return input_grad;
}

}  // namespace leafnet
