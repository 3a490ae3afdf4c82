#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sonarnav/geometry.hpp"
#include "sonarnav/occupancy_grid.hpp"
#include "sonarnav/scenario.hpp"

namespace sonarnav {

enum class SimFailure { LocalMinimum, StepBudget, PlannerError };

const char* to_string(SimFailure f);

struct SimResult {
  bool reached_goal = false;
  int steps = 0;
  std::vector<Pose> true_trajectory;   // steps + 1 entries
  std::vector<Pose> odom_trajectory;   // steps + 1 entries
  OccupancyGrid final_global_map{{0.0, 0.0}, 1.0, 1, 1};
  std::optional<SimFailure> failure_reason;
  std::string failure_detail;
  int fusions = 0;
};

/// Receives the global map after each fusion, numbered from 0.
using MapSink = std::function<void(int index, const OccupancyGrid& global)>;

/// Command for a rotate-then-drive waypoint follower.
struct DriveCommand {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

/// Heading error >= 0.05 rad: turn in place at 1 rad/s. Otherwise drive at
/// `speed` steering with omega = 2 * error / control_dt, clamped to +-1 rad/s.
DriveCommand pursue_waypoint(const Pose& pose, const Vec2& waypoint, double speed, double control_dt);

/// Runs the sweep / map / plan / move loop until the odometry pose reaches the goal.
///
/// Sensing uses the true pose; mapping, planning and the goal test use only the
/// odometry estimate. A single seed drives two independent generators, one for
/// sensor noise and one for encoder noise.
SimResult run(const Scenario& scenario, const MapSink& sink = {});

/// Seed offset that separates the odometry stream from the sensor stream.
inline constexpr std::uint64_t kOdometrySeedSalt = 0x9E3779B97F4A7C15ULL;

/// trajectory.csv body: step,true_x,true_y,true_theta,odom_x,odom_y,odom_theta
std::string trajectory_csv(const SimResult& result);

}  // namespace sonarnav
