#include "vfi/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "vfi/flow_ops.hpp"
#include "vfi/image_ops.hpp"
#include "vfi/parallel.hpp"

namespace vfi {

namespace {

void validate_quad(const FrameQuad& quad) {
  const Frame& ref = quad.frames[1];
  if (ref.empty()) throw std::invalid_argument("quad frames are empty");
  for (int i = 0; i < 4; ++i)
    if (!quad.frames[i].same_shape(ref))
      throw std::invalid_argument("quad frames differ in shape");
}

void validate_t(double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("interpolation time must lie strictly in (0, 1)");
}

// Displacement of the anchor after t_offset frame intervals, where "prev",
// "next" and "far" are the anchor's own neighbours on its time axis.
FlowField anchor_flow(const FlowField& prev, const FlowField& next,
                      const FlowField& far, double t_offset,
                      const PipelineConfig& config) {
  switch (config.motion) {
    case MotionMode::Linear:
      return linear_flow(next, t_offset);
    case MotionMode::Quadratic:
      return flow_at(quadratic_fit(next, prev), t_offset);
    case MotionMode::Rectified:
    default:
      return flow_at(rectified_fit(prev, next, far, config.rectify), t_offset);
  }
}

// Per-pixel mean absolute difference of the two warped anchors; the fusion
// mask treats it as a confidence signal for the branch.
Image warp_error_map(const Frame& i0w, const Frame& i1w) {
  Image err(i0w.height, i0w.width, 1);
  parallel_chunks(i0w.height, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < i0w.width; ++x) {
        double sum = 0.0;
        for (int c = 0; c < i0w.channels; ++c)
          sum += std::abs(static_cast<double>(i0w.at(y, x, c)) - i1w.at(y, x, c));
        err.at(y, x, 0) = static_cast<float>(sum / i0w.channels);
      }
  });
  return err;
}

}  // namespace

QuadFlows estimate_quad_flows(const FrameQuad& quad,
                              const PipelineConfig& config) {
  validate_quad(quad);
  const bool need_prev = config.motion != MotionMode::Linear;
  const bool need_far = config.motion == MotionMode::Rectified;
  const int h = quad.frames[1].height;
  const int w = quad.frames[1].width;

  auto est = [&](int ia, int ib) {
    return estimate_flow(config.flow, quad.frames[ia], quad.frames[ib],
                         quad.labels[ia], quad.labels[ib]);
  };

  QuadFlows flows;
  // Anchor 0 = frames[1]; neighbours at labels[0] (prev), [2] (next), [3] (far).
  flows.a0_next = est(1, 2);
  if (need_prev)
    flows.a0_prev = quad.replicated_front ? FlowField(h, w) : est(1, 0);
  if (need_far)
    flows.a0_far = quad.replicated_back ? flows.a0_next : est(1, 3);
  // Anchor 1 = frames[2]; on its reversed time axis the neighbours are
  // frames[3] (prev), frames[1] (next) and frames[0] (far).
  flows.a1_next = est(2, 1);
  if (need_prev)
    flows.a1_prev = quad.replicated_back ? FlowField(h, w) : est(2, 3);
  if (need_far)
    flows.a1_far = quad.replicated_front ? flows.a1_next : est(2, 0);
  return flows;
}

InterpResult interpolate_with_flows(const FrameQuad& quad,
                                    const QuadFlows& flows, double t,
                                    const PipelineConfig& config) {
  validate_quad(quad);
  validate_t(t);

  FlowField f0t = anchor_flow(flows.a0_prev, flows.a0_next, flows.a0_far, t, config);
  FlowField f1t = anchor_flow(flows.a1_prev, flows.a1_next, flows.a1_far, 1.0 - t, config);

  ReversedFlow r0 = reverse_flow(f0t);
  ReversedFlow r1 = reverse_flow(f1t);
  if (config.refine) {
    r0.flow = refine_flow(r0.flow);
    r1.flow = refine_flow(r1.flow);
  }

  InterpResult result;
  result.i0w = backward_warp(quad.frames[1], r0.flow);
  result.i1w = backward_warp(quad.frames[2], r1.flow);
  result.blended = blend_warped(result.i0w, result.i1w, r0.visibility,
                                r1.visibility, t);
  if (config.residual) {
    Image e0w = backward_warp(channel_gradient(quad.frames[1]), r0.flow);
    Image e1w = backward_warp(channel_gradient(quad.frames[2]), r1.flow);
    Image f0w = backward_warp(extract_features(quad.frames[1], config.residual->stem), r0.flow);
    Image f1w = backward_warp(extract_features(quad.frames[2], config.residual->stem), r1.flow);
    result.frame = residual_synthesis(result.blended, result.i0w, result.i1w,
                                      e0w, e1w, f0w, f1w, config.residual->body);
  } else {
    result.frame = result.blended;
  }
  result.vis0 = std::move(r0.visibility);
  result.vis1 = std::move(r1.visibility);
  result.to_t0 = std::move(r0.flow);
  result.to_t1 = std::move(r1.flow);
  return result;
}

InterpResult interpolate_single(const FrameQuad& quad, double t,
                                const PipelineConfig& config) {
  return interpolate_with_flows(quad, estimate_quad_flows(quad, config), t, config);
}

std::vector<Frame> interpolate_multi(const FrameQuad& quad,
                                     const PipelineConfig& config) {
  if (config.t_values.empty())
    throw std::invalid_argument("no interpolation times requested");
  for (std::size_t i = 0; i < config.t_values.size(); ++i) {
    validate_t(config.t_values[i]);
    if (i > 0 && !(config.t_values[i] > config.t_values[i - 1]))
      throw std::invalid_argument("interpolation times must be strictly increasing");
  }

  std::vector<Frame> out;
  out.reserve(config.t_values.size());

  if (!config.fusion) {
    QuadFlows flows = estimate_quad_flows(quad, config);
    for (double t : config.t_values)
      out.push_back(interpolate_with_flows(quad, flows, t, config).frame);
    return out;
  }

  // Two-scale run: flows are estimated once per scale and shared across all
  // t values; the branch picks the right set by the incoming quad's size.
  PipelineConfig base = config;
  base.fusion.reset();
  PipelineConfig half_cfg = base;
  half_cfg.flow = scaled_source(base.flow, 0.5);

  FrameQuad half_quad = downscale_quad(quad);
  QuadFlows full_flows = estimate_quad_flows(quad, base);
  QuadFlows half_flows = estimate_quad_flows(half_quad, half_cfg);

  BranchFn branch = [&](const FrameQuad& q, double tt) -> ScaleBranch {
    bool is_full = q.frames[1].height == quad.frames[1].height &&
                   q.frames[1].width == quad.frames[1].width;
    InterpResult r = interpolate_with_flows(q, is_full ? full_flows : half_flows,
                                            tt, is_full ? base : half_cfg);
    return ScaleBranch{std::move(r.frame), warp_error_map(r.i0w, r.i1w)};
  };
  for (double t : config.t_values)
    out.push_back(run_two_scale(branch, quad, t, *config.fusion));
  return out;
}

Frame interpolate_one(const FrameQuad& quad, double t,
                      const PipelineConfig& config) {
  PipelineConfig cfg = config;
  cfg.t_values = {t};
  return std::move(interpolate_multi(quad, cfg).front());
}

}  // namespace vfi
