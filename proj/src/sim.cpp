#include "sonarnav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "number_format.hpp"
#include "sonarnav/errors.hpp"
#include "sonarnav/robot.hpp"
#include "sonarnav/sensor.hpp"

namespace sonarnav {
namespace {

constexpr double kHeadingLock = 0.05;  // rad
constexpr double kMaxTurnRate = 1.0;   // rad/s
// Waypoints closer than this many planner steps count as passed.
constexpr double kLookAheadSteps = 4.0;

SimFailure from_plan_failure(PlanFailure f) {
  return f == PlanFailure::LocalMinimum ? SimFailure::LocalMinimum : SimFailure::StepBudget;
}

}  // namespace

const char* to_string(SimFailure f) {
  switch (f) {
    case SimFailure::LocalMinimum: return "local_minimum";
    case SimFailure::StepBudget: return "step_budget";
    case SimFailure::PlannerError: return "planner_error";
  }
  return "unknown";
}

DriveCommand pursue_waypoint(const Pose& pose, const Vec2& waypoint, double speed, double control_dt) {
  const Vec2 d = waypoint - pose.position();
  const double error = wrap_angle(std::atan2(d.y, d.x) - pose.theta);
  if (std::abs(error) >= kHeadingLock) return {0.0, error > 0.0 ? kMaxTurnRate : -kMaxTurnRate};
  return {speed, std::clamp(2.0 * error / control_dt, -kMaxTurnRate, kMaxTurnRate)};
}

SimResult run(const Scenario& sc, const MapSink& sink) {
  sc.validate();

  Rng sensor_rng(sc.seed);
  Rng odom_rng(sc.seed ^ kOdometrySeedSalt);

  OccupancyGrid global = global_grid_for(sc.world.bounds(), sc.sensor.max_range, sc.grid_resolution, sc.limits);
  std::optional<OccupancyGrid> local;
  Pose truth = sc.start;
  Pose odom = sc.start;

  SimResult result;
  result.true_trajectory.push_back(truth);
  result.odom_trajectory.push_back(odom);

  auto finish = [&](std::optional<SimFailure> failure, std::string detail = {}) {
    result.reached_goal = !failure.has_value();
    result.failure_reason = failure;
    result.failure_detail = std::move(detail);
    result.final_global_map = global;
    return result;
  };

  // Physics from the true pose, registration at the encoder estimate.
  auto sense_and_fuse = [&] {
    const auto measurements = sweep(sc.world, truth, sc.sensor, sensor_rng);
    local = local_grid_for(odom, sc.sensor.max_range, global);
    update_from_sweep(*local, odom, measurements, sc.sensor, sc.model);
    fuse_into_global(global, *local);
    if (sink) sink(result.fusions, global);
    ++result.fusions;
  };

  std::vector<Vec2> targets;
  std::size_t target = 0;
  std::optional<SimFailure> plan_failure;
  std::string plan_detail;
  auto replan = [&] {
    OccupancyGrid latest_only = global;
    const OccupancyGrid* grid = &global;
    if (sc.replan_map == ReplanMap::Local) {
      latest_only = global_grid_for(sc.world.bounds(), sc.sensor.max_range, sc.grid_resolution, sc.limits);
      fuse_into_global(latest_only, *local);
      grid = &latest_only;
    }
    try {
      const auto plan = plan_path(odom.position(), sc.goal, *grid, sc.planner);
      if (!plan.ok()) {
        plan_failure = from_plan_failure(*plan.failure);
        plan_detail = std::string("planner: ") + to_string(*plan.failure);
        return false;
      }
      targets.assign(plan.path.waypoints.begin() + 1, plan.path.waypoints.end());
      targets.push_back(sc.goal);
      target = 0;
      return true;
    } catch (const InputError& e) {
      plan_failure = SimFailure::PlannerError;
      plan_detail = e.what();
      return false;
    }
  };

  auto at_goal = [&] { return distance(odom.position(), sc.goal) <= sc.planner.goal_tol; };

  sense_and_fuse();
  if (at_goal()) return finish(std::nullopt);
  if (!replan()) return finish(plan_failure, plan_detail);

  const double reach = kLookAheadSteps * sc.planner.step_size;
  while (result.steps < sc.max_sim_steps) {
    while (target + 1 < targets.size() && distance(odom.position(), targets[target]) <= reach) ++target;
    const auto cmd = pursue_waypoint(odom, targets[target], sc.robot_speed, sc.control_dt);

    Displacement moved{cmd.v * sc.control_dt, cmd.omega * sc.control_dt};
    Pose next = step_kinematics(truth, cmd.v, cmd.omega, sc.control_dt);
    if (!sc.world.bounds().contains(next.position()) || sc.world.blocks(truth.position(), next.position())) {
      // Wheels stall against the obstacle or room edge; only the turn happens.
      moved.distance = 0.0;
      next = apply_displacement(truth, moved);
    }
    truth = next;
    odom = apply_displacement(odom, odometry_step(moved, sc.odometry, odom_rng));

    ++result.steps;
    result.true_trajectory.push_back(truth);
    result.odom_trajectory.push_back(odom);

    if (at_goal()) return finish(std::nullopt);
    if (result.steps % sc.sweep_every == 0) {
      sense_and_fuse();
      if (!replan()) return finish(plan_failure, plan_detail);
    }
  }
  return finish(SimFailure::StepBudget, "sim: max_steps reached");
}

std::string trajectory_csv(const SimResult& result) {
  using detail::format_double;
  std::ostringstream out;
  out << "step,true_x,true_y,true_theta,odom_x,odom_y,odom_theta\n";
  for (std::size_t i = 0; i < result.true_trajectory.size(); ++i) {
    const auto& t = result.true_trajectory[i];
    const auto& o = result.odom_trajectory[i];
    out << i << ',' << format_double(t.x) << ',' << format_double(t.y) << ',' << format_double(t.theta) << ','
        << format_double(o.x) << ',' << format_double(o.y) << ',' << format_double(o.theta) << '\n';
  }
  return out.str();
}

}  // namespace sonarnav
