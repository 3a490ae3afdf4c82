#pragma once

// Brute-force ray cast: march in fixed steps and report the first sample
// found inside (or, for segments, across) an obstacle.

#include <cmath>
#include <optional>
#include <variant>

#include "sonarnav/world.hpp"

namespace oracle {

using sonarnav::Vec2;

inline bool crossed_segment(const sonarnav::Segment& s, const Vec2& prev, const Vec2& cur) {
  const Vec2 e = s.b - s.a;
  const double before = sonarnav::cross(e, prev - s.a);
  const double after = sonarnav::cross(e, cur - s.a);
  if (before * after > 0.0) return false;
  if (before == after) return false;  // both zero: moving along the line
  const double w = before / (before - after);
  const Vec2 p = prev + w * (cur - prev);
  const double u = sonarnav::dot(p - s.a, e) / sonarnav::dot(e, e);
  return u >= 0.0 && u <= 1.0;
}

inline bool inside(const sonarnav::Obstacle& obstacle, const Vec2& prev, const Vec2& p) {
  if (const auto* s = std::get_if<sonarnav::Segment>(&obstacle)) return crossed_segment(*s, prev, p);
  if (const auto* c = std::get_if<sonarnav::Circle>(&obstacle)) {
    return sonarnav::distance(p, c->center) <= c->radius;
  }
  const auto& b = std::get<sonarnav::Rect>(obstacle).box;
  return b.contains(p);
}

/// First sample distance k*step (k >= 1, k*step <= limit) touching an obstacle.
inline std::optional<double> sampled_ray_cast(const sonarnav::World& world, const Vec2& origin, const Vec2& dir,
                                              double limit, double step = 1e-4) {
  const auto n = static_cast<long>(std::floor(limit / step));
  Vec2 prev = origin;
  for (long k = 1; k <= n; ++k) {
    const double t = k * step;
    const Vec2 p = origin + t * dir;
    for (const auto& obstacle : world.obstacles()) {
      if (inside(obstacle, prev, p)) return t;
    }
    prev = p;
  }
  return std::nullopt;
}

}  // namespace oracle
