#include "vfi/motion_model.hpp"

#include <cmath>
#include <stdexcept>

#include "vfi/parallel.hpp"

namespace vfi {

namespace {

void require_same_shape(const FlowField& a, const FlowField& b, const char* who) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(who) + ": flow shape mismatch");
}

constexpr float kAlphaFloor = 1e-7f;  // keeps stored weights strictly inside (0, 1)

}  // namespace

FlowField linear_flow(const FlowField& flow_to_next, double t) {
  FlowField out(flow_to_next.height, flow_to_next.width);
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    out.u[i] = static_cast<float>(t * flow_to_next.u[i]);
    out.v[i] = static_cast<float>(t * flow_to_next.v[i]);
  }
  return out;
}

QuadraticMotion quadratic_fit(const FlowField& flow_to_next,
                              const FlowField& flow_to_prev) {
  require_same_shape(flow_to_next, flow_to_prev, "quadratic_fit");
  QuadraticMotion m{FlowField(flow_to_next.height, flow_to_next.width),
                    FlowField(flow_to_next.height, flow_to_next.width)};
  for (std::size_t i = 0; i < flow_to_next.u.size(); ++i) {
    m.acceleration.u[i] = flow_to_next.u[i] + flow_to_prev.u[i];
    m.acceleration.v[i] = flow_to_next.v[i] + flow_to_prev.v[i];
    m.velocity.u[i] = 0.5f * (flow_to_next.u[i] - flow_to_prev.u[i]);
    m.velocity.v[i] = 0.5f * (flow_to_next.v[i] - flow_to_prev.v[i]);
  }
  return m;
}

QuadraticMotion least_squares_fit(const FlowField& flow_to_prev,
                                  const FlowField& flow_to_next,
                                  const FlowField& flow_to_far) {
  require_same_shape(flow_to_prev, flow_to_next, "least_squares_fit");
  require_same_shape(flow_to_prev, flow_to_far, "least_squares_fit");
  QuadraticMotion m{FlowField(flow_to_prev.height, flow_to_prev.width),
                    FlowField(flow_to_prev.height, flow_to_prev.width)};
  for (std::size_t i = 0; i < flow_to_prev.u.size(); ++i) {
    // Accumulate in double: the result must track the exact fit to ~1e-6.
    double pu = flow_to_prev.u[i], nu = flow_to_next.u[i], fu = flow_to_far.u[i];
    double pv = flow_to_prev.v[i], nv = flow_to_next.v[i], fv = flow_to_far.v[i];
    m.velocity.u[i] = static_cast<float>(lsq::kVelFromPrev * pu + lsq::kVelFromNext * nu + lsq::kVelFromFar * fu);
    m.velocity.v[i] = static_cast<float>(lsq::kVelFromPrev * pv + lsq::kVelFromNext * nv + lsq::kVelFromFar * fv);
    m.acceleration.u[i] = static_cast<float>(lsq::kAccFromPrev * pu + lsq::kAccFromNext * nu + lsq::kAccFromFar * fu);
    m.acceleration.v[i] = static_cast<float>(lsq::kAccFromPrev * pv + lsq::kAccFromNext * nv + lsq::kAccFromFar * fv);
  }
  return m;
}

AccelTriplet accel_estimates(const FlowField& flow_to_prev,
                             const FlowField& flow_to_next,
                             const FlowField& flow_to_far) {
  require_same_shape(flow_to_prev, flow_to_next, "accel_estimates");
  require_same_shape(flow_to_prev, flow_to_far, "accel_estimates");
  int h = flow_to_prev.height, w = flow_to_prev.width;
  AccelTriplet t{{FlowField(h, w), FlowField(h, w), FlowField(h, w)}};
  for (std::size_t i = 0; i < flow_to_prev.u.size(); ++i) {
    // Each estimate eliminates the velocity between two displacement
    // constraints; all three equal the true acceleration on quadratic motion.
    t.estimate[0].u[i] = flow_to_next.u[i] + flow_to_prev.u[i];
    t.estimate[0].v[i] = flow_to_next.v[i] + flow_to_prev.v[i];
    t.estimate[1].u[i] = static_cast<float>((2.0 / 3.0) * flow_to_prev.u[i] + (1.0 / 3.0) * flow_to_far.u[i]);
    t.estimate[1].v[i] = static_cast<float>((2.0 / 3.0) * flow_to_prev.v[i] + (1.0 / 3.0) * flow_to_far.v[i]);
    t.estimate[2].u[i] = flow_to_far.u[i] - 2.0f * flow_to_next.u[i];
    t.estimate[2].v[i] = flow_to_far.v[i] - 2.0f * flow_to_next.v[i];
  }
  return t;
}

ConsistencyMask direction_gate(const AccelTriplet& triplet) {
  const FlowField& a = triplet.estimate[0];
  const FlowField& b = triplet.estimate[1];
  const FlowField& c = triplet.estimate[2];
  ConsistencyMask mask;
  mask.height = a.height;
  mask.width = a.width;
  mask.ok.assign(a.u.size(), 0);
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    double ab = static_cast<double>(a.u[i]) * b.u[i] + static_cast<double>(a.v[i]) * b.v[i];
    double ac = static_cast<double>(a.u[i]) * c.u[i] + static_cast<double>(a.v[i]) * c.v[i];
    double bc = static_cast<double>(b.u[i]) * c.u[i] + static_cast<double>(b.v[i]) * c.v[i];
    mask.ok[i] = (ab > 0.0 && ac > 0.0 && bc > 0.0) ? 1 : 0;
  }
  return mask;
}

double alpha_weight(double z, const RectifyParams& params) {
  return 0.5 * (1.0 - std::tanh(params.steepness * (z - params.center)));
}

AlphaMap alpha_maps(const AccelTriplet& triplet, const RectifyParams& params) {
  const FlowField& a = triplet.estimate[0];
  const FlowField& b = triplet.estimate[1];
  AlphaMap m;
  m.height = a.height;
  m.width = a.width;
  m.u.resize(a.u.size());
  m.v.resize(a.v.size());
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    double wu = alpha_weight(std::abs(static_cast<double>(a.u[i]) - b.u[i]), params);
    double wv = alpha_weight(std::abs(static_cast<double>(a.v[i]) - b.v[i]), params);
    m.u[i] = std::min(1.0f - kAlphaFloor, std::max(kAlphaFloor, static_cast<float>(wu)));
    m.v[i] = std::min(1.0f - kAlphaFloor, std::max(kAlphaFloor, static_cast<float>(wv)));
  }
  return m;
}

QuadraticMotion rectified_fit(const FlowField& flow_to_prev,
                              const FlowField& flow_to_next,
                              const FlowField& flow_to_far,
                              const RectifyParams& params) {
  AccelTriplet triplet = accel_estimates(flow_to_prev, flow_to_next, flow_to_far);
  ConsistencyMask gate = direction_gate(triplet);
  AlphaMap alpha = alpha_maps(triplet, params);
  QuadraticMotion base = quadratic_fit(flow_to_next, flow_to_prev);
  QuadraticMotion fit = least_squares_fit(flow_to_prev, flow_to_next, flow_to_far);

  QuadraticMotion out = base;  // gated-off pixels keep these bits untouched
  for (std::size_t i = 0; i < gate.ok.size(); ++i) {
    if (!gate.ok[i]) continue;
    double au = alpha.u[i], av = alpha.v[i];
    out.velocity.u[i] = static_cast<float>(au * fit.velocity.u[i] + (1.0 - au) * base.velocity.u[i]);
    out.velocity.v[i] = static_cast<float>(av * fit.velocity.v[i] + (1.0 - av) * base.velocity.v[i]);
    out.acceleration.u[i] = static_cast<float>(au * fit.acceleration.u[i] + (1.0 - au) * base.acceleration.u[i]);
    out.acceleration.v[i] = static_cast<float>(av * fit.acceleration.v[i] + (1.0 - av) * base.acceleration.v[i]);
  }
  return out;
}

FlowField flow_at(const QuadraticMotion& motion, double t) {
  const FlowField& vel = motion.velocity;
  const FlowField& acc = motion.acceleration;
  FlowField out(vel.height, vel.width);
  const double half_t2 = 0.5 * t * t;
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    out.u[i] = static_cast<float>(half_t2 * acc.u[i] + t * vel.u[i]);
    out.v[i] = static_cast<float>(half_t2 * acc.v[i] + t * vel.v[i]);
  }
  return out;
}

}  // namespace vfi
