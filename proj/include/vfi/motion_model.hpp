#pragma once

#include <cstdint>

#include "vfi/types.hpp"

namespace vfi {

// Per-pixel quadratic motion of the anchor frame: displacement after time t
// is velocity*t + acceleration*t^2/2, with t in frame intervals.
struct QuadraticMotion {
  FlowField velocity;
  FlowField acceleration;
};

// Three per-pixel acceleration estimates, each from a different pair of the
// anchor's displacement constraints:
//   estimate[0] combines the flows to the previous and next frames,
//   estimate[1] the flows to the previous and far (t = +2) frames,
//   estimate[2] the flows to the next and far frames.
// They agree exactly when motion is truly quadratic.
struct AccelTriplet {
  std::array<FlowField, 3> estimate;
};

// Per-pixel, per-component blend weights in (0, 1).
struct AlphaMap {
  int height = 0;
  int width = 0;
  std::vector<float> u;
  std::vector<float> v;
};

// Per-pixel flag: all three acceleration estimates point the same way.
struct ConsistencyMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> ok;
};

// Shape of the agreement-to-weight curve: weight 0.5 at |disagreement| ==
// center, falling off with the given steepness.
struct RectifyParams {
  double steepness = 5.0;
  double center = 1.0;
};

// Closed-form least-squares coefficients for fitting (velocity, acceleration)
// to the three displacement constraints
//   flow_to_prev = -v + a/2, flow_to_next = v + a/2, flow_to_far = 2v + 2a.
// Exposed so tests can confirm them against a numeric pseudo-inverse.
namespace lsq {
inline constexpr double kVelFromPrev = -6.5 / 11.0;
inline constexpr double kVelFromNext = 2.5 / 11.0;
inline constexpr double kVelFromFar = 1.0 / 11.0;
inline constexpr double kAccFromPrev = 7.0 / 11.0;
inline constexpr double kAccFromNext = -1.0 / 11.0;
inline constexpr double kAccFromFar = 4.0 / 11.0;
}  // namespace lsq

// Constant-velocity prediction: displacement t * flow_to_next.
FlowField linear_flow(const FlowField& flow_to_next, double t);

// Central-difference quadratic fit from the two neighbouring flows:
//   acceleration = flow_to_next + flow_to_prev,
//   velocity     = (flow_to_next - flow_to_prev) / 2.
QuadraticMotion quadratic_fit(const FlowField& flow_to_next,
                              const FlowField& flow_to_prev);

// Least-squares quadratic fit over all three displacement constraints.
QuadraticMotion least_squares_fit(const FlowField& flow_to_prev,
                                  const FlowField& flow_to_next,
                                  const FlowField& flow_to_far);

// The three pairwise acceleration estimates used to judge how consistent the
// three flows are with a single quadratic.
AccelTriplet accel_estimates(const FlowField& flow_to_prev,
                             const FlowField& flow_to_next,
                             const FlowField& flow_to_far);

// True where every pairwise dot product between the three estimates is
// strictly positive; a zero estimate therefore gates to false.
ConsistencyMask direction_gate(const AccelTriplet& triplet);

// Blend weight in (0, 1): 0.5 * (1 - tanh(steepness * (z - center))).
// Strictly decreasing in the disagreement magnitude z.
double alpha_weight(double z, const RectifyParams& params = {});

// Componentwise alpha_weight of |estimate[0] - estimate[1]|, clamped to
// [1e-7, 1 - 1e-7] so stored weights stay strictly inside (0, 1).
AlphaMap alpha_maps(const AccelTriplet& triplet,
                    const RectifyParams& params = {});

// Gated blend of the least-squares fit with the central-difference fit.
// Where the direction gate is false the central-difference values are copied
// bit-for-bit; elsewhere each component mixes as
//   alpha * least_squares + (1 - alpha) * central_difference.
QuadraticMotion rectified_fit(const FlowField& flow_to_prev,
                              const FlowField& flow_to_next,
                              const FlowField& flow_to_far,
                              const RectifyParams& params = {});

// Displacement field at time t: velocity*t + acceleration*t^2/2.
FlowField flow_at(const QuadraticMotion& motion, double t);

}  // namespace vfi
