#pragma once

#include <yaml-cpp/yaml.h>

#include <initializer_list>
#include <string>
#include <string_view>

#include "sonarnav/errors.hpp"
#include "sonarnav/geometry.hpp"

namespace sonarnav::detail {

inline int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line < 0 ? -1 : mark.line + 1;
}

inline void require_map(const YAML::Node& node, std::string_view what) {
  if (!node.IsMap()) throw ParseError(std::string(what) + ": expected a mapping", line_of(node));
}

/// Rejects keys outside `allowed` so typos surface instead of silently using defaults.
inline void check_keys(const YAML::Node& node, std::string_view section,
                       std::initializer_list<std::string_view> allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw ParseError(std::string(section) + ": unknown field '" + key + "'", line_of(kv.first));
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, std::string_view field) {
  if (!node.IsScalar()) {
    throw ParseError(std::string(field) + ": expected a scalar value", line_of(node));
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(std::string(field) + ": cannot parse '" + node.Scalar() + "'", line_of(node));
  }
}

template <typename T>
T get_or(const YAML::Node& parent, std::string_view section, const char* key, T fallback) {
  const auto node = parent[key];
  if (!node) return fallback;
  return scalar<T>(node, std::string(section) + "." + key);
}

inline YAML::Node require(const YAML::Node& parent, std::string_view section, const char* key) {
  const auto node = parent[key];
  if (!node) {
    throw ParseError(std::string(section) + ": missing required field '" + key + "'",
                     line_of(parent));
  }
  return node;
}

inline std::vector<double> number_list(const YAML::Node& node, std::string_view field,
                                       std::size_t expected) {
  if (!node.IsSequence() || node.size() != expected) {
    throw ParseError(std::string(field) + ": expected a list of " + std::to_string(expected) +
                         " numbers",
                     line_of(node));
  }
  std::vector<double> out;
  for (const auto& item : node) out.push_back(scalar<double>(item, field));
  return out;
}

inline Vec2 vec2(const YAML::Node& node, std::string_view field) {
  const auto v = number_list(node, field, 2);
  return {v[0], v[1]};
}

}  // namespace sonarnav::detail
