#include "leafnet/conv.hpp"

#include <cstring>
#include <string>

#include "leafnet/errors.hpp"
#include "leafnet/gemm.hpp"
#include "leafnet/threading.hpp"

namespace leafnet {

PadSpec pad_for(Padding padding, int64_t kernel) {
  if (padding == Padding::Valid) return {0, 0};
  return {(kernel - 1) / 2, kernel - 1 - (kernel - 1) / 2};
}

int64_t conv_out_extent(int64_t in, int64_t kernel, int64_t stride,
                        Padding padding) {
  const PadSpec p = pad_for(padding, kernel);
  const int64_t span = in + p.begin + p.end - kernel;
  if (span < 0) {
    throw ShapeError("kernel extent " + std::to_string(kernel) +
                     " exceeds padded input extent " +
                     std::to_string(in + p.begin + p.end));
  }
  return span / stride + 1;
}

Shape4 conv2d_output_shape(const Shape4& input, const Shape4& weights,
                           int64_t stride, Padding padding) {
  if (stride < 1) throw ParamError("conv2d: stride must be >= 1");
  if (weights.h < 1 || weights.w < 1)
    throw ParamError("conv2d: kernel extents must be >= 1");
  if (input.c != weights.c) {
    throw ShapeError("conv2d: axis C mismatch, input has " +
                     std::to_string(input.c) + " channels but weights expect " +
                     std::to_string(weights.c));
  }
  return {input.n, weights.n,
          conv_out_extent(input.h, weights.h, stride, padding),
          conv_out_extent(input.w, weights.w, stride, padding)};
}

void im2col(const float* image, int64_t channels, int64_t height, int64_t width,
            int64_t kh, int64_t kw, int64_t stride, Padding padding,
            float* cols) {
  const PadSpec ph = pad_for(padding, kh);
  const PadSpec pw = pad_for(padding, kw);
  const int64_t out_h = conv_out_extent(height, kh, stride, padding);
  const int64_t out_w = conv_out_extent(width, kw, stride, padding);
  const int64_t patch = out_h * out_w;

  for (int64_t c = 0; c < channels; ++c) {
    const float* plane = image + c * height * width;
    for (int64_t i = 0; i < kh; ++i) {
      for (int64_t j = 0; j < kw; ++j) {
        float* row = cols + ((c * kh + i) * kw + j) * patch;
        for (int64_t oh = 0; oh < out_h; ++oh) {
          const int64_t y = oh * stride - ph.begin + i;
          float* dst = row + oh * out_w;
          if (y < 0 || y >= height) {
            std::memset(dst, 0, out_w * sizeof(float));
            continue;
          }
          const float* src = plane + y * width;
          for (int64_t ow = 0; ow < out_w; ++ow) {
            const int64_t x = ow * stride - pw.begin + j;
            dst[ow] = (x >= 0 && x < width) ? src[x] : 0.0f;
          }
        }
      }
    }
  }
}

void col2im(const float* cols, int64_t channels, int64_t height, int64_t width,
            int64_t kh, int64_t kw, int64_t stride, Padding padding,
            float* image) {
  const PadSpec ph = pad_for(padding, kh);
  const PadSpec pw = pad_for(padding, kw);
  const int64_t out_h = conv_out_extent(height, kh, stride, padding);
  const int64_t out_w = conv_out_extent(width, kw, stride, padding);
  const int64_t patch = out_h * out_w;

  std::memset(image, 0, channels * height * width * sizeof(float));
  for (int64_t c = 0; c < channels; ++c) {
    float* plane = image + c * height * width;
    for (int64_t i = 0; i < kh; ++i) {
      for (int64_t j = 0; j < kw; ++j) {
        const float* row = cols + ((c * kh + i) * kw + j) * patch;
        for (int64_t oh = 0; oh < out_h; ++oh) {
          const int64_t y = oh * stride - ph.begin + i;
          if (y < 0 || y >= height) continue;
          float* dst = plane + y * width;
          const float* src = row + oh * out_w;
          for (int64_t ow = 0; ow < out_w; ++ow) {
            const int64_t x = ow * stride - pw.begin + j;
            if (x >= 0 && x < width) dst[x] += src[ow];
          }
        }
      }
    }
  }
}

namespace {

// Scratch reused across the images a worker processes.
thread_local std::vector<float> t_cols;
thread_local std::vector<float> t_dcols;

void check_bias(std::span<const float> bias, int64_t out_c) {
  if (!bias.empty() && static_cast<int64_t>(bias.size()) != out_c) {
    throw ShapeError("conv2d: bias length " + std::to_string(bias.size()) +
                     " does not match output channels " +
                     std::to_string(out_c));
  }
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, const Tensor& weights,
                      std::span<const float> bias, int64_t stride,
                      Padding padding) {
  const Shape4 out_shape = conv2d_output_shape(input.shape(), weights.shape(),
                                               stride, padding);
  check_bias(bias, out_shape.c);

  const int64_t kdim = weights.shape().c * weights.shape().h * weights.shape().w;
  const int64_t patch = out_shape.h * out_shape.w;
  const int64_t in_plane = input.shape().c * input.shape().h * input.shape().w;

  Tensor output(out_shape);
  parallel_for(0, input.shape().n, [&](int64_t n) {
    t_cols.resize(kdim * patch);
    im2col(input.data() + n * in_plane, input.shape().c, input.shape().h,
           input.shape().w, weights.shape().h, weights.shape().w, stride,
           padding, t_cols.data());
    float* out = output.data() + n * out_shape.c * patch;
    gemm_nn(out_shape.c, patch, kdim, weights.data(), t_cols.data(), out);
    if (!bias.empty()) {
      for (int64_t oc = 0; oc < out_shape.c; ++oc) {
        float* p = out + oc * patch;
        const float b = bias[oc];
        for (int64_t i = 0; i < patch; ++i) p[i] += b;
      }
    }
  });
  return output;
}

Conv2dGrads conv2d_backward(const Tensor& input, const Tensor& weights,
                            bool has_bias, const Tensor& output_grad,
                            int64_t stride, Padding padding) {
  const Shape4 out_shape = conv2d_output_shape(input.shape(), weights.shape(),
                                               stride, padding);
  check_same_shape(output_grad.shape(), out_shape, "conv2d backward");

  const int64_t batch = input.shape().n;
  const int64_t kdim = weights.shape().c * weights.shape().h * weights.shape().w;
  const int64_t patch = out_shape.h * out_shape.w;
  const int64_t in_plane = input.shape().c * input.shape().h * input.shape().w;
  const int64_t wsize = weights.numel();

  Conv2dGrads grads;
  grads.input = Tensor(input.shape());
  grads.weights = Tensor(weights.shape());
  if (has_bias) grads.bias.assign(out_shape.c, 0.0f);

  // Per-image weight/bias contributions land in private buffers; the final
  // accumulation walks images in ascending order so the batch reduction has
  // one fixed order no matter how the images were scheduled.
  std::vector<float> dw_partial(batch * wsize);
  std::vector<float> db_partial(has_bias ? batch * out_shape.c : 0);

  parallel_for(0, batch, [&](int64_t n) {
    t_cols.resize(kdim * patch);
    t_dcols.resize(kdim * patch);
    const float* dout = output_grad.data() + n * out_shape.c * patch;

    im2col(input.data() + n * in_plane, input.shape().c, input.shape().h,
           input.shape().w, weights.shape().h, weights.shape().w, stride,
           padding, t_cols.data());

    // dW_n = dOut_n * cols_n^T
    gemm_nt(out_shape.c, kdim, patch, dout, t_cols.data(),
            dw_partial.data() + n * wsize);

    // dcols = W^T * dOut_n, scattered back to the input image
    gemm_tn(kdim, patch, out_shape.c, weights.data(), dout, t_dcols.data());
    col2im(t_dcols.data(), input.shape().c, input.shape().h, input.shape().w,
           weights.shape().h, weights.shape().w, stride, padding,
           grads.input.data() + n * in_plane);

    if (has_bias) {
      float* db = db_partial.data() + n * out_shape.c;
      for (int64_t oc = 0; oc < out_shape.c; ++oc) {
        float s = 0.0f;
        const float* p = dout + oc * patch;
        for (int64_t i = 0; i < patch; ++i) s += p[i];
        db[oc] = s;
      }
    }
  });

  for (int64_t n = 0; n < batch; ++n) {
    const float* dw = dw_partial.data() + n * wsize;
    float* acc = grads.weights.data();
    for (int64_t i = 0; i < wsize; ++i) acc[i] += dw[i];
    if (has_bias) {
      const float* db = db_partial.data() + n * out_shape.c;
      for (int64_t c = 0; c < out_shape.c; ++c) grads.bias[c] += db[c];
    }
  }
  return grads;
}

}  // namespace leafnet
