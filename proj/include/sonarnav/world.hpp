#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "sonarnav/geometry.hpp"

namespace YAML {
class Node;
}

namespace sonarnav {

struct Segment {
  Vec2 a;
  Vec2 b;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Solid axis-aligned rectangle.
struct Rect {
  Box box;
  friend bool operator==(const Rect&, const Rect&) = default;
};

using Obstacle = std::variant<Segment, Circle, Rect>;

/// Throws ValidationError when an obstacle is degenerate.
void validate_obstacle(const Obstacle& obstacle);

/// Smallest world-space box enclosing the obstacle.
Box bounding_box(const Obstacle& obstacle);

/// Distance from a point to the obstacle's boundary (segments are their own boundary).
double distance_to_obstacle(const Vec2& p, const Obstacle& obstacle);

/// Ray parameter of the first boundary crossing at t > 0, if any.
std::optional<double> intersect(const Obstacle& obstacle, const Vec2& origin, const Vec2& dir);

/// Static 2D environment. Bounds are an open room: they bound the geometry
/// but never produce an echo; only declared obstacles reflect.
class World {
public:
  World(Box bounds, std::vector<Obstacle> obstacles = {});

  const Box& bounds() const { return bounds_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }

  /// Returns a copy with one more obstacle (validated like the constructor).
  World with_obstacle(const Obstacle& obstacle) const;

  /// Distance to the nearest obstacle hit along the half-line origin + t*dir,
  /// 0 < t <= max_range. `dir` must be unit length within 1e-9.
  std::optional<double> ray_cast(const Vec2& origin, const Vec2& dir, double max_range) const;

  /// True when the straight move from `from` to `to` crosses an obstacle.
  bool blocks(const Vec2& from, const Vec2& to) const;

private:
  Box bounds_;
  std::vector<Obstacle> obstacles_;
};

/// Parses the world section (a YAML mapping with `bounds` and `obstacles`).
World load_world(std::string_view text);
World world_from_yaml(const YAML::Node& node);

}  // namespace sonarnav
