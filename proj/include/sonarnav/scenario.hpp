#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "sonarnav/geometry.hpp"
#include "sonarnav/occupancy_grid.hpp"
#include "sonarnav/planner.hpp"
#include "sonarnav/robot.hpp"
#include "sonarnav/sensor.hpp"
#include "sonarnav/world.hpp"

namespace sonarnav {

/// Which evidence the replanner sees.
enum class ReplanMap {
  Global,  // everything fused so far
  Local,   // only the latest sweep
};

/// Complete simulation input.
struct Scenario {
  World world{Box{{0.0, 0.0}, {1.0, 1.0}}};
  Pose start;
  Vec2 goal;
  SensorParams sensor;
  PlannerParams planner;
  OdometryParams odometry;
  SonarInverseModel model;
  LogOddsLimits limits;
  double grid_resolution = 0.1;
  std::uint64_t seed = 0;
  int max_sim_steps = 5000;
  int sweep_every = 10;
  double robot_speed = 0.2;  // m/s
  double control_dt = 0.1;   // s
  ReplanMap replan_map = ReplanMap::Global;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

/// Parses and validates a scenario document. Unspecified fields keep their defaults.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical document with every field spelled out; parses back to the same scenario.
std::string to_yaml(const Scenario& scenario);

}  // namespace sonarnav
