#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sonarnav/geometry.hpp"
#include "sonarnav/occupancy_grid.hpp"

namespace sonarnav {

struct PlannerParams {
  double k_att = 1.0;
  double k_rep = 0.5;
  double rho0 = 0.5;         // m, repulsion influence radius
  double step_size = 0.05;   // m
  double goal_tol = 0.1;     // m
  int max_steps = 10000;
  double occ_threshold = 0.65;
  double min_progress = 1e-4;  // m over `progress_window` steps
  int progress_window = 20;

  void validate() const;
};

struct Path {
  std::vector<Vec2> waypoints;

  double length() const;
};

enum class PlanFailure { LocalMinimum, StepBudgetExhausted };

const char* to_string(PlanFailure f);

struct PlanResult {
  Path path;  // partial on failure
  std::optional<PlanFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// Obstacle points the planner reacts to: centres of cells whose occupancy
/// probability reaches the threshold. Built once per grid.
class ObstacleField {
public:
  ObstacleField(const OccupancyGrid& grid, double occ_threshold);

  bool occupied(int ix, int iy) const;
  bool occupied_at(const Vec2& p) const;
  std::size_t count() const { return count_; }

  /// Calls fn(centre) for every obstacle centre within `radius` of q (window scan).
  template <typename Fn>
  void for_each_near(const Vec2& q, double radius, Fn&& fn) const;

  const OccupancyGrid& grid() const { return *grid_; }

private:
  const OccupancyGrid* grid_;
  std::vector<char> mask_;
  std::size_t count_ = 0;
};

/// U_att = 1/2 k_att |q - goal|^2.
double attractive_potential(const Vec2& q, const Vec2& goal, double k_att);
/// Force -grad U_att = k_att (goal - q), pointing at the goal.
Vec2 attractive_gradient(const Vec2& q, const Vec2& goal, double k_att);

/// Sum over obstacle centres o with rho = |q - o| <= rho0 of
/// 1/2 k_rep (1/rho - 1/rho0)^2, with rho floored at half a cell.
double repulsive_potential(const Vec2& q, const ObstacleField& field, const PlannerParams& params);
/// Force -grad U_rep, pointing away from obstacles.
Vec2 repulsive_gradient(const Vec2& q, const ObstacleField& field, const PlannerParams& params);
Vec2 repulsive_gradient(const Vec2& q, const OccupancyGrid& grid, const PlannerParams& params);

/// Fixed-step descent along the normalised total force until the goal is
/// within goal_tol. Reports a local minimum when the last `progress_window`
/// steps moved less than min_progress, and never tries to escape it.
PlanResult plan_path(const Vec2& start, const Vec2& goal, const OccupancyGrid& grid, const PlannerParams& params);

template <typename Fn>
void ObstacleField::for_each_near(const Vec2& q, double radius, Fn&& fn) const {
  const auto& g = *grid_;
  const double res = g.resolution();
  const int reach = static_cast<int>(std::ceil(radius / res)) + 1;
  const double fx = std::floor((q.x - g.origin().x) / res);
  const double fy = std::floor((q.y - g.origin().y) / res);
  if (!std::isfinite(fx) || !std::isfinite(fy)) return;
  const double lo_x = std::max(0.0, fx - reach), hi_x = std::min<double>(g.width() - 1, fx + reach);
  const double lo_y = std::max(0.0, fy - reach), hi_y = std::min<double>(g.height() - 1, fy + reach);
  for (int iy = static_cast<int>(lo_y); iy <= static_cast<int>(hi_y); ++iy) {
    for (int ix = static_cast<int>(lo_x); ix <= static_cast<int>(hi_x); ++ix) {
      if (!occupied(ix, iy)) continue;
      const Vec2 c = g.cell_center(ix, iy);
      if (distance(q, c) <= radius) fn(c);
    }
  }
}

}  // namespace sonarnav
