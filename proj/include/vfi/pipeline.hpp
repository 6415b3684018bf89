#pragma once

#include <optional>
#include <vector>

#include "vfi/flow_estimation.hpp"
#include "vfi/motion_model.hpp"
#include "vfi/ms_fusion.hpp"
#include "vfi/synthesis.hpp"
#include "vfi/types.hpp"

namespace vfi {

enum class MotionMode { Linear, Quadratic, Rectified };

struct PipelineConfig {
  FlowSource flow = BlockMatchFlow{};
  MotionMode motion = MotionMode::Rectified;
  RectifyParams rectify;
  bool refine = true;                     // median-filter reversed flows
  std::optional<SynthWeights> residual;   // residual synthesis stage
  std::optional<MaskPredictor> fusion;    // two-scale fusion stage
  std::vector<double> t_values = {0.5};   // strictly increasing, in (0, 1)
};

// Flows estimated once per quad and shared across all t values. Fields not
// needed by the configured motion mode stay empty. The anchor-1 fields are
// named for the time-reversed quad: its "next" neighbour is frame [1] and its
// "far" neighbour is frame [0].
struct QuadFlows {
  FlowField a0_prev;  // frames[1] -> frames[0]
  FlowField a0_next;  // frames[1] -> frames[2]
  FlowField a0_far;   // frames[1] -> frames[3]
  FlowField a1_prev;  // frames[2] -> frames[3]
  FlowField a1_next;  // frames[2] -> frames[1]
  FlowField a1_far;   // frames[2] -> frames[0]
};

// Stage snapshots of a single-scale interpolation.
struct InterpResult {
  Frame frame;        // final output of this scale
  Frame blended;      // pre-residual blend
  Frame i0w, i1w;     // warped anchors
  Image vis0, vis1;   // splat visibilities
  FlowField to_t0;    // flow t -> anchor 0 (post refine)
  FlowField to_t1;    // flow t -> anchor 1
};

QuadFlows estimate_quad_flows(const FrameQuad& quad,
                              const PipelineConfig& config);

InterpResult interpolate_with_flows(const FrameQuad& quad,
                                    const QuadFlows& flows, double t,
                                    const PipelineConfig& config);

// Single-scale run: estimate flows, predict both anchor motions (anchor 1 via
// the time-reversed quad evaluated at 1 - t), reverse, warp, blend, and
// optionally apply residual synthesis.
InterpResult interpolate_single(const FrameQuad& quad, double t,
                                const PipelineConfig& config);

// Full run including the optional two-scale fusion wrapper.
Frame interpolate_one(const FrameQuad& quad, double t,
                      const PipelineConfig& config);

// All config.t_values, estimating flows once per quad (per scale).
std::vector<Frame> interpolate_multi(const FrameQuad& quad,
                                     const PipelineConfig& config);

}  // namespace vfi
