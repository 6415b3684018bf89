#include "vfi/ms_fusion.hpp"

#include <cmath>
#include <stdexcept>

#include "vfi/image_ops.hpp"
#include "vfi/parallel.hpp"

namespace vfi {

namespace {

constexpr int kMinFusionSide = 8;

Image constant_mask(int h, int w, float value) {
  return Image(h, w, 1, value);
}

Image warp_error_mask(const Image& err_full, const Image& err_half_up) {
  Image mask(err_full.height, err_full.width, 1);
  parallel_chunks(err_full.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < err_full.width; ++x) {
        double ef = err_full.at(y, x, 0);
        double eh = err_half_up.at(y, x, 0);
        double denom = ef + eh;
        // Low full-scale error -> trust the full-scale branch.
        double m = denom > 0.0 ? eh / denom : 0.5;
        mask.at(y, x, 0) = static_cast<float>(m);
      }
  });
  return mask;
}

Image net_mask(const ConvNet& net, const Frame& full, const Frame& up_half) {
  if (net.layers.empty()) throw std::invalid_argument("mask net has no layers");
  if (net.layers.front().in_channels != 2 * full.channels)
    throw std::invalid_argument("mask net input channels must be twice the frame channels");
  if (net.layers.back().out_channels != 1)
    throw std::invalid_argument("mask net must produce a single channel");

  Image input(full.height, full.width, 2 * full.channels);
  parallel_chunks(full.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < full.width; ++x) {
        for (int c = 0; c < full.channels; ++c) {
          input.at(y, x, c) = full.at(y, x, c);
          input.at(y, x, full.channels + c) = up_half.at(y, x, c);
        }
      }
  });
  Image raw = run_net(input, net);
  if (raw.height != full.height || raw.width != full.width)
    throw std::invalid_argument("mask net must preserve spatial size");
  Image mask(full.height, full.width, 1);
  parallel_chunks(full.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < full.width; ++x) {
        double z = raw.at(y, x, 0);
        mask.at(y, x, 0) = static_cast<float>(1.0 / (1.0 + std::exp(-z)));
      }
  });
  return mask;
}

}  // namespace

Image predict_mask(const MaskPredictor& pred, const Frame& full, const Frame& up_half,
                   const Image& err_full, const Image& err_half_up) {
  if (!full.same_shape(up_half))
    throw std::invalid_argument("predict_mask: branch outputs differ in shape");
  if (const auto* c = std::get_if<ConstantMask>(&pred)) {
    if (!(c->value >= 0.0 && c->value <= 1.0))
      throw std::invalid_argument("constant mask value must lie in [0,1]");
    return constant_mask(full.height, full.width, static_cast<float>(c->value));
  }
  if (std::holds_alternative<WarpErrorMask>(pred)) {
    if (err_full.height != full.height || err_full.width != full.width ||
        err_full.channels != 1 || !err_full.same_shape(err_half_up))
      throw std::invalid_argument("predict_mask: warp error maps must be 1-channel full-size");
    return warp_error_mask(err_full, err_half_up);
  }
  return net_mask(std::get<NetMask>(pred).net, full, up_half);
}

Frame fuse(const Image& mask, const Frame& full, const Frame& up_half) {
  if (!full.same_shape(up_half)) throw std::invalid_argument("fuse: shape mismatch");
  if (mask.height != full.height || mask.width != full.width || mask.channels != 1)
    throw std::invalid_argument("fuse: mask must be 1-channel full-size");
  Frame out(full.height, full.width, full.channels);
  parallel_chunks(full.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < full.width; ++x) {
        float m = mask.at(y, x, 0);
        for (int c = 0; c < full.channels; ++c) {
          float a = full.at(y, x, c);
          float b = up_half.at(y, x, c);
          out.at(y, x, c) = m * a + (1.0f - m) * b;
        }
      }
  });
  return out;
}

FrameQuad downscale_quad(const FrameQuad& quad) {
  FrameQuad half = quad;
  int h = quad.frames[0].height / 2;
  int w = quad.frames[0].width / 2;
  if (h < 1 || w < 1) throw std::invalid_argument("downscale_quad: frames too small");
  for (int i = 0; i < 4; ++i)
    half.frames[i] = resample_bilinear(quad.frames[i], h, w);
  return half;
}

Frame run_two_scale(const BranchFn& branch, const FrameQuad& quad, double t,
                    const MaskPredictor& pred) {
  const Frame& ref = quad.frames[1];
  if (ref.height < kMinFusionSide || ref.width < kMinFusionSide)
    throw std::invalid_argument("two-scale fusion needs frames of at least 8x8");

  ScaleBranch full = branch(quad, t);
  ScaleBranch half = branch(downscale_quad(quad), t);

  Frame up_half = resample_bilinear(half.output, ref.height, ref.width);
  Image err_half_up = resample_bilinear(half.warp_error, ref.height, ref.width);

  Image mask = predict_mask(pred, full.output, up_half, full.warp_error, err_half_up);
  return fuse(mask, full.output, up_half);
}

}  // namespace vfi
