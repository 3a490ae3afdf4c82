#include "sonarnav/world.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sonarnav/errors.hpp"
#include "yaml_util.hpp"

namespace sonarnav {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::optional<double> intersect_segment(const Segment& s, const Vec2& o, const Vec2& d) {
  const Vec2 e = s.b - s.a;
  const Vec2 ao = s.a - o;
  const double denom = cross(d, e);
  const double scale = norm(e);
  if (std::abs(denom) <= 1e-12 * scale) {
    // Parallel: only a collinear ray can touch, first at the nearer endpoint.
    if (std::abs(cross(ao, d)) > 1e-12 * std::max(1.0, norm(ao))) return std::nullopt;
    const double ta = dot(s.a - o, d);
    const double tb = dot(s.b - o, d);
    const double lo = std::min(ta, tb);
    if (lo > 0.0) return lo;
    return std::nullopt;  // origin on the segment or segment behind
  }
  const double t = cross(ao, e) / denom;
  const double u = cross(ao, d) / denom;
  if (t > 0.0 && u >= 0.0 && u <= 1.0) return t;
  return std::nullopt;
}

std::optional<double> intersect_circle(const Circle& c, const Vec2& o, const Vec2& d) {
  const Vec2 oc = o - c.center;
  const double b = dot(d, oc);
  const double k = dot(oc, oc) - c.radius * c.radius;
  const double disc = b * b - k;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  // Stable quadratic roots.
  const double q = (b >= 0.0) ? -(b + root) : -(b - root);
  double t1 = q;
  double t2 = (q != 0.0) ? k / q : -b;
  if (t1 > t2) std::swap(t1, t2);
  if (t1 > 0.0) return t1;
  if (t2 > 0.0) return t2;
  return std::nullopt;
}

std::optional<double> intersect_rect(const Rect& r, const Vec2& o, const Vec2& d) {
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  const double origin[2] = {o.x, o.y};
  const double dir[2] = {d.x, d.y};
  const double lo[2] = {r.box.min.x, r.box.min.y};
  const double hi[2] = {r.box.max.x, r.box.max.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return std::nullopt;
      continue;
    }
    double t0 = (lo[axis] - origin[axis]) / dir[axis];
    double t1 = (hi[axis] - origin[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit) return std::nullopt;
  if (t_enter > 0.0) return t_enter;
  if (t_exit > 0.0) return t_exit;
  return std::nullopt;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = dot(e, e);
  const double u = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return distance(p, a + u * e);
}

bool box_within(const Box& inner, const Box& outer) {
  return inner.min.x >= outer.min.x && inner.min.y >= outer.min.y &&
         inner.max.x <= outer.max.x && inner.max.y <= outer.max.y;
}

bool finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

void validate_obstacle(const Obstacle& obstacle) {
  std::visit(overloaded{
                 [](const Segment& s) {
                   if (!finite(s.a) || !finite(s.b)) throw ValidationError("segment: non-finite endpoint");
                   if (s.a == s.b) throw ValidationError("segment: endpoints must be distinct");
                 },
                 [](const Circle& c) {
                   if (!finite(c.center) || !std::isfinite(c.radius))
                     throw ValidationError("circle: non-finite value");
                   if (!(c.radius > 0.0)) throw ValidationError("circle: radius must be > 0");
                 },
                 [](const Rect& r) {
                   if (!finite(r.box.min) || !finite(r.box.max))
                     throw ValidationError("rect: non-finite corner");
                   if (!(r.box.width() > 0.0 && r.box.height() > 0.0))
                     throw ValidationError("rect: must have positive area");
                 },
             },
             obstacle);
}

Box bounding_box(const Obstacle& obstacle) {
  return std::visit(overloaded{
                        [](const Segment& s) {
                          return Box{{std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)},
                                     {std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)}};
                        },
                        [](const Circle& c) {
                          const Vec2 r{c.radius, c.radius};
                          return Box{c.center - r, c.center + r};
                        },
                        [](const Rect& r) { return r.box; },
                    },
                    obstacle);
}

double distance_to_obstacle(const Vec2& p, const Obstacle& obstacle) {
  return std::visit(
      overloaded{
          [&](const Segment& s) { return point_segment_distance(p, s.a, s.b); },
          [&](const Circle& c) { return std::abs(distance(p, c.center) - c.radius); },
          [&](const Rect& r) {
            const Box& b = r.box;
            const Vec2 c1{b.max.x, b.min.y}, c3{b.min.x, b.max.y};
            return std::min({point_segment_distance(p, b.min, c1), point_segment_distance(p, c1, b.max),
                             point_segment_distance(p, b.max, c3), point_segment_distance(p, c3, b.min)});
          },
      },
      obstacle);
}

std::optional<double> intersect(const Obstacle& obstacle, const Vec2& origin, const Vec2& dir) {
  return std::visit(overloaded{
                        [&](const Segment& s) { return intersect_segment(s, origin, dir); },
                        [&](const Circle& c) { return intersect_circle(c, origin, dir); },
                        [&](const Rect& r) { return intersect_rect(r, origin, dir); },
                    },
                    obstacle);
}

World::World(Box bounds, std::vector<Obstacle> obstacles)
    : bounds_(bounds), obstacles_(std::move(obstacles)) {
  if (!finite(bounds_.min) || !finite(bounds_.max) || !(bounds_.width() > 0.0) ||
      !(bounds_.height() > 0.0)) {
    throw ValidationError("world.bounds: width and height must be > 0");
  }
  for (std::size_t i = 0; i < obstacles_.size(); ++i) {
    try {
      validate_obstacle(obstacles_[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("world.obstacles[" + std::to_string(i) + "]: " + e.what());
    }
    if (!box_within(bounding_box(obstacles_[i]), bounds_)) {
      throw ValidationError("world.obstacles[" + std::to_string(i) + "]: lies outside world bounds");
    }
  }
}

World World::with_obstacle(const Obstacle& obstacle) const {
  auto obstacles = obstacles_;
  obstacles.push_back(obstacle);
  return World(bounds_, std::move(obstacles));
}

std::optional<double> World::ray_cast(const Vec2& origin, const Vec2& dir, double max_range) const {
  if (!(max_range > 0.0)) throw InputError("ray_cast: max_range must be > 0");
  if (!(std::abs(norm(dir) - 1.0) <= 1e-9)) throw InputError("ray_cast: direction must be unit length");
  std::optional<double> best;
  for (const auto& obstacle : obstacles_) {
    const auto t = intersect(obstacle, origin, dir);
    if (t && *t <= max_range && (!best || *t < *best)) best = t;
  }
  return best;
}

bool World::blocks(const Vec2& from, const Vec2& to) const {
  const Vec2 delta = to - from;
  const double len = norm(delta);
  if (len == 0.0) return false;
  return ray_cast(from, delta * (1.0 / len), len).has_value();
}

World world_from_yaml(const YAML::Node& node) {
  using namespace detail;
  require_map(node, "world");
  check_keys(node, "world", {"bounds", "obstacles"});
  const auto bounds_node = require(node, "world", "bounds");
  require_map(bounds_node, "world.bounds");
  check_keys(bounds_node, "world.bounds", {"min", "max"});
  const Box bounds{vec2(require(bounds_node, "world.bounds", "min"), "world.bounds.min"),
                   vec2(require(bounds_node, "world.bounds", "max"), "world.bounds.max")};

  std::vector<Obstacle> obstacles;
  if (const auto list = node["obstacles"]) {
    if (!list.IsSequence() && !list.IsNull()) {
      throw ParseError("world.obstacles: expected a list", line_of(list));
    }
    for (std::size_t i = 0; list.IsSequence() && i < list.size(); ++i) {
      const auto item = list[i];
      const std::string where = "world.obstacles[" + std::to_string(i) + "]";
      if (!item.IsMap() || item.size() != 1) {
        throw ParseError(where + ": expected one of {segment, circle, rect}", line_of(item));
      }
      const auto kind = item.begin()->first.as<std::string>();
      const auto body = item.begin()->second;
      require_map(body, where);
      if (kind == "segment") {
        check_keys(body, where, {"from", "to"});
        obstacles.emplace_back(Segment{vec2(require(body, where, "from"), where + ".from"),
                                       vec2(require(body, where, "to"), where + ".to")});
      } else if (kind == "circle") {
        check_keys(body, where, {"center", "radius"});
        obstacles.emplace_back(Circle{vec2(require(body, where, "center"), where + ".center"),
                                      scalar<double>(require(body, where, "radius"), where + ".radius")});
      } else if (kind == "rect") {
        check_keys(body, where, {"min", "max"});
        obstacles.emplace_back(Rect{Box{vec2(require(body, where, "min"), where + ".min"),
                                        vec2(require(body, where, "max"), where + ".max")}});
      } else {
        throw ParseError(where + ": unknown obstacle type '" + kind + "'", line_of(item));
      }
    }
  }
  return World(bounds, std::move(obstacles));
}

World load_world(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1);
  }
  if (root.IsMap() && root["world"]) return world_from_yaml(root["world"]);
  return world_from_yaml(root);
}

}  // namespace sonarnav
