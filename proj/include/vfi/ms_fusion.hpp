#pragma once

#include <functional>
#include <variant>

#include "vfi/synthesis.hpp"
#include "vfi/types.hpp"

namespace vfi {

// Mask value is the weight of the full-resolution branch.
struct ConstantMask {
  double value = 1.0;
};

// Weighs each pixel by relative warp error: mask = e_half / (e_full + e_half),
// 0.5 where both errors vanish. Lower full-branch error pulls the mask to 1.
struct WarpErrorMask {};

// Learnable mask: a net over the concatenated branch outputs (2C channels in,
// 1 channel out), squashed through a logistic so an all-zero net yields 0.5.
struct NetMask {
  ConvNet net;
};

using MaskPredictor = std::variant<ConstantMask, WarpErrorMask, NetMask>;

// 1-channel mask in [0, 1]. err_full/err_half are per-branch warp-error maps
// (mean absolute difference of the branch's two warped anchors), both at full
// resolution; only WarpErrorMask reads them.
Image predict_mask(const MaskPredictor& predictor, const Frame& full,
                   const Frame& up_half, const Image& err_full,
                   const Image& err_half);

// Per-pixel convex combination mask*full + (1-mask)*up_half.
Frame fuse(const Image& mask, const Frame& full, const Frame& up_half);

// One scale branch of a two-scale run: the interpolated frame plus its
// 1-channel warp-error map at that branch's resolution.
struct ScaleBranch {
  Frame output;
  Image warp_error;
};

using BranchFn = std::function<ScaleBranch(const FrameQuad&, double)>;

// Runs the branch at full resolution and on a bilinearly halved quad,
// upsamples the reduced result back, and fuses via the predictor. Requires
// every side >= 8 px. With ConstantMask{1.0} the result is bit-identical to
// the full branch alone.
Frame run_two_scale(const BranchFn& branch, const FrameQuad& quad, double t,
                    const MaskPredictor& predictor);

// The halved quad a two-scale run feeds to the reduced branch.
FrameQuad downscale_quad(const FrameQuad& quad);

}  // namespace vfi
