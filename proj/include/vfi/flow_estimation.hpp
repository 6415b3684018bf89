#pragma once

#include <memory>
#include <string>
#include <variant>

#include "vfi/synth_bench.hpp"
#include "vfi/types.hpp"

namespace vfi {

struct BlockMatchParams {
  int levels = 3;  // pyramid levels
  int radius = 4;  // per-level integer search radius
  int patch = 7;   // odd patch side for the SAD cost
};

// Exact flow evaluated from scene ground truth. scale < 1 serves the reduced
// branch of a two-scale run.
struct AnalyticFlow {
  std::shared_ptr<const SpriteScene> scene;
  double scale = 1.0;
};

// Flows loaded from files; pattern substitutes {from}/{to} with the frame
// labels. scale < 1 resamples and rescales the loaded field.
struct PrecomputedFlow {
  std::string pattern;
  double scale = 1.0;
};

struct BlockMatchFlow {
  BlockMatchParams params;
};

using FlowSource = std::variant<AnalyticFlow, PrecomputedFlow, BlockMatchFlow>;

// Flow from frame a to frame b. label_a/label_b identify the frames to
// sources that do not look at pixels (analytic times, precomputed paths).
FlowField estimate_flow(const FlowSource& source, const Frame& a,
                        const Frame& b, int label_a, int label_b);

// Coarse-to-fine SAD block matching: integer search per pyramid level (ties
// broken toward the smaller displacement, lexicographic on (|d|, dx, dy)),
// a 3x3 median over each level's field before it seeds the next, and
// parabolic subpixel refinement at the finest level.
FlowField block_match_flow(const Frame& a, const Frame& b,
                           const BlockMatchParams& params = {});

// Adapts a source to frames resized by factor (two-scale reduced branch).
FlowSource scaled_source(const FlowSource& source, double factor);

}  // namespace vfi
