#pragma once

#include "vfi/types.hpp"

namespace vfi {

// Result of turning a forward flow (anchor -> t) into a backward flow
// (t -> anchor). Visibility is the clamped splat weight in [0, 1]; pixels no
// source mapped onto are hole-filled and carry visibility 0.
struct ReversedFlow {
  FlowField flow;
  Image visibility;  // 1 channel
};

// Forward-splats each source pixel to x + flow(x) with bilinear weights
// shaped by a Gaussian distance kernel (sigma = 1 px), then negates the
// weighted mean of the contributing vectors.
ReversedFlow reverse_flow(const FlowField& forward);

// Samples src at x + flow(x) with bilinear interpolation, clamp-to-edge.
Image backward_warp(const Image& src, const FlowField& flow);

// Per-component 3x3 median with replicate borders; removes isolated splat
// outliers while leaving smooth regions untouched.
FlowField refine_flow(const FlowField& flow);

}  // namespace vfi
