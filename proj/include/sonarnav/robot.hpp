#pragma once

#include "sonarnav/geometry.hpp"
#include "sonarnav/sensor.hpp"

namespace sonarnav {

struct OdometryParams {
  double trans_noise_sigma = 0.01;  // fraction of distance travelled
  double rot_noise_sigma = 0.01;    // rad per rad turned

  void validate() const;
};

/// Encoder-level motion increment: arc length and heading change.
struct Displacement {
  double distance = 0.0;  // m
  double rotation = 0.0;  // rad
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Exact unicycle integration of (v, omega) held for dt.
Pose step_kinematics(const Pose& pose, double v, double omega, double dt);

/// Same integrator driven by a displacement rather than velocities.
Pose apply_displacement(const Pose& pose, const Displacement& d);

/// Corrupts a true displacement the way wheel encoders would:
/// distance * (1 + e_t), rotation + e_r with e_t ~ N(0, trans_sigma) and
/// e_r ~ N(0, rot_sigma * |rotation|). Always consumes two normal draws.
Displacement odometry_step(const Displacement& truth, const OdometryParams& params, Rng& rng);

}  // namespace sonarnav
