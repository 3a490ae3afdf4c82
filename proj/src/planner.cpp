#include "sonarnav/planner.hpp"

#include <cmath>

#include "sonarnav/errors.hpp"

namespace sonarnav {

void PlannerParams::validate() const {
  auto fail = [](const char* msg) { throw ValidationError(std::string("planner.") + msg); };
  if (!(k_att > 0.0)) fail("k_att: must be > 0");
  if (!(k_rep >= 0.0)) fail("k_rep: must be >= 0");
  if (!(rho0 > 0.0)) fail("rho0: must be > 0");
  if (!(step_size > 0.0)) fail("step_size: must be > 0");
  if (!(goal_tol > 0.0)) fail("goal_tol: must be > 0");
  if (max_steps < 1) fail("max_steps: must be >= 1");
  if (!(occ_threshold > 0.5 && occ_threshold < 1.0)) fail("occ_threshold: must be in (0.5, 1)");
  if (!(min_progress > 0.0)) fail("min_progress: must be > 0");
  if (progress_window < 1) fail("progress_window: must be >= 1");
}

double Path::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += distance(waypoints[i - 1], waypoints[i]);
  return total;
}

const char* to_string(PlanFailure f) {
  switch (f) {
    case PlanFailure::LocalMinimum: return "local_minimum";
    case PlanFailure::StepBudgetExhausted: return "step_budget_exhausted";
  }
  return "unknown";
}

ObstacleField::ObstacleField(const OccupancyGrid& grid, double occ_threshold)
    : grid_(&grid), mask_(grid.cells().size(), 0) {
  const auto cells = grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (probability(cells[i]) >= occ_threshold) {
      mask_[i] = 1;
      ++count_;
    }
  }
}

bool ObstacleField::occupied(int ix, int iy) const {
  return grid_->in_bounds(ix, iy) &&
         mask_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid_->width()) + static_cast<std::size_t>(ix)];
}

bool ObstacleField::occupied_at(const Vec2& p) const {
  const auto c = grid_->cell_of(p);
  return c && occupied(c->ix, c->iy);
}

double attractive_potential(const Vec2& q, const Vec2& goal, double k_att) {
  const Vec2 d = q - goal;
  return 0.5 * k_att * dot(d, d);
}

Vec2 attractive_gradient(const Vec2& q, const Vec2& goal, double k_att) { return k_att * (goal - q); }

double repulsive_potential(const Vec2& q, const ObstacleField& field, const PlannerParams& params) {
  const double floor_rho = 0.5 * field.grid().resolution();
  double total = 0.0;
  field.for_each_near(q, params.rho0, [&](const Vec2& o) {
    const double rho = std::max(distance(q, o), floor_rho);
    const double s = 1.0 / rho - 1.0 / params.rho0;
    total += 0.5 * params.k_rep * s * s;
  });
  return total;
}

Vec2 repulsive_gradient(const Vec2& q, const ObstacleField& field, const PlannerParams& params) {
  if (params.k_rep == 0.0) return {};
  const double floor_rho = 0.5 * field.grid().resolution();
  Vec2 force;
  field.for_each_near(q, params.rho0, [&](const Vec2& o) {
    const Vec2 away = q - o;
    const double rho = norm(away);
    if (rho == 0.0) return;  // direction undefined on the centre itself
    const double r = std::max(rho, floor_rho);
    force += (params.k_rep * (1.0 / r - 1.0 / params.rho0) / (r * r) / rho) * away;
  });
  return force;
}

Vec2 repulsive_gradient(const Vec2& q, const OccupancyGrid& grid, const PlannerParams& params) {
  return repulsive_gradient(q, ObstacleField(grid, params.occ_threshold), params);
}

PlanResult plan_path(const Vec2& start, const Vec2& goal, const OccupancyGrid& grid, const PlannerParams& params) {
  params.validate();
  if (!grid.cell_of(start)) throw InputError("plan_path: start outside grid extent");
  if (!grid.cell_of(goal)) throw InputError("plan_path: goal outside grid extent");
  const ObstacleField field(grid, params.occ_threshold);
  if (field.occupied_at(start)) throw InputError("plan_path: start lies in an occupied cell");
  if (field.occupied_at(goal)) throw InputError("plan_path: goal lies in an occupied cell");

  PlanResult result;
  auto& wp = result.path.waypoints;
  wp.push_back(start);
  Vec2 q = start;
  const auto window = static_cast<std::size_t>(params.progress_window);
  for (int steps = 0;; ++steps) {
    if (distance(q, goal) <= params.goal_tol) return result;
    if (steps == params.max_steps) {
      result.failure = PlanFailure::StepBudgetExhausted;
      return result;
    }
    const Vec2 force = attractive_gradient(q, goal, params.k_att) + repulsive_gradient(q, field, params);
    const double magnitude = norm(force);
    if (magnitude == 0.0 || !std::isfinite(magnitude)) {
      result.failure = PlanFailure::LocalMinimum;
      return result;
    }
    q += (params.step_size / magnitude) * force;
    wp.push_back(q);
    if (wp.size() > window && distance(wp.back(), wp[wp.size() - 1 - window]) < params.min_progress) {
      result.failure = PlanFailure::LocalMinimum;
      return result;
    }
  }
}

}  // namespace sonarnav
