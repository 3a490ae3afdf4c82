#include "sonarnav/robot.hpp"

#include <cmath>

#include "sonarnav/errors.hpp"

namespace sonarnav {
namespace {

// Heading changes below this integrate as a straight line.
constexpr double kStraightTurn = 1e-9;

}  // namespace

void OdometryParams::validate() const {
  if (!(trans_noise_sigma >= 0.0)) throw ValidationError("robot.trans_noise_sigma: must be >= 0");
  if (!(rot_noise_sigma >= 0.0)) throw ValidationError("robot.rot_noise_sigma: must be >= 0");
}

Pose apply_displacement(const Pose& pose, const Displacement& d) {
  Pose out = pose;
  if (std::abs(d.rotation) < kStraightTurn) {
    out.x += d.distance * std::cos(pose.theta);
    out.y += d.distance * std::sin(pose.theta);
  } else {
    const double radius = d.distance / d.rotation;
    const double end = pose.theta + d.rotation;
    out.x += radius * (std::sin(end) - std::sin(pose.theta));
    out.y += radius * (std::cos(pose.theta) - std::cos(end));
  }
  out.theta = wrap_angle(pose.theta + d.rotation);
  return out;
}

Pose step_kinematics(const Pose& pose, double v, double omega, double dt) {
  if (!(dt > 0.0)) throw InputError("step_kinematics: dt must be > 0");
  return apply_displacement(pose, {v * dt, omega * dt});
}

Displacement odometry_step(const Displacement& truth, const OdometryParams& params, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double zt = gauss(rng);
  const double zr = gauss(rng);
  return {truth.distance * (1.0 + params.trans_noise_sigma * zt),
          truth.rotation + params.rot_noise_sigma * std::abs(truth.rotation) * zr};
}

}  // namespace sonarnav
