#pragma once

// Reference ray-mode inverse sensor update. Instead of walking the grid it
// tests every cell's box against the beam segment (slab clipping), then
// classifies by the projected cell centre.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "sonarnav/occupancy_grid.hpp"

namespace oracle {

using sonarnav::Vec2;

/// Length of segment origin + t*dir, t in [0, length], inside the closed box.
inline double clipped_length(const sonarnav::Box& box, const Vec2& o, const Vec2& d, double length) {
  double lo = 0.0, hi = length;
  const double oc[2] = {o.x, o.y}, dc[2] = {d.x, d.y};
  const double bmin[2] = {box.min.x, box.min.y}, bmax[2] = {box.max.x, box.max.y};
  for (int a = 0; a < 2; ++a) {
    if (dc[a] == 0.0) {
      if (oc[a] < bmin[a] || oc[a] > bmax[a]) return 0.0;
      continue;
    }
    double t0 = (bmin[a] - oc[a]) / dc[a], t1 = (bmax[a] - oc[a]) / dc[a];
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  return std::max(0.0, hi - lo);
}

struct BeamCells {
  std::vector<sonarnav::CellIndex> free;
  std::vector<sonarnav::CellIndex> occupied;
};

inline BeamCells classify_beam(const sonarnav::OccupancyGrid& grid, const Vec2& o, const Vec2& dir,
                               std::optional<double> range, double max_range, double band) {
  BeamCells out;
  const double length = range ? *range + band : max_range;
  const double res = grid.resolution();
  for (int iy = 0; iy < grid.height(); ++iy) {
    for (int ix = 0; ix < grid.width(); ++ix) {
      const sonarnav::Box box{{grid.origin().x + ix * res, grid.origin().y + iy * res},
                              {grid.origin().x + (ix + 1) * res, grid.origin().y + (iy + 1) * res}};
      if (clipped_length(box, o, dir, length) <= 0.0) continue;
      if (!range) {
        out.free.push_back({ix, iy});
        continue;
      }
      const Vec2 c{grid.origin().x + (ix + 0.5) * res, grid.origin().y + (iy + 0.5) * res};
      const double along = sonarnav::dot(c - o, dir);
      if (along < *range - band) {
        out.free.push_back({ix, iy});
      } else if (std::abs(along - *range) <= band) {
        out.occupied.push_back({ix, iy});
      }
    }
  }
  return out;
}

inline sonarnav::OccupancyGrid expected_sweep_update(sonarnav::OccupancyGrid grid, const sonarnav::Pose& pose,
                                                     const std::vector<sonarnav::EchoMeasurement>& measurements,
                                                     const sonarnav::SensorParams& sensor,
                                                     const sonarnav::SonarInverseModel& model) {
  const double band = model.band(grid.resolution());
  for (const auto& m : measurements) {
    const double a = pose.theta + m.bearing;
    const Vec2 dir{std::cos(a), std::sin(a)};
    std::optional<double> range;
    if (m.echo_time) range = sensor.speed_of_sound * *m.echo_time / 2.0;
    const auto cells = classify_beam(grid, pose.position(), dir, range, sensor.max_range, band);
    for (const auto& c : cells.free) grid.add(c.ix, c.iy, model.l_free);
    for (const auto& c : cells.occupied) grid.add(c.ix, c.iy, model.l_occ);
  }
  return grid;
}

}  // namespace oracle
