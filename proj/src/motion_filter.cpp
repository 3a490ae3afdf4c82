#include "sonarnav/motion_filter.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <string>

#include "sonarnav/errors.hpp"

namespace sonarnav {

FilterParams FilterParams::for_sensor(const SensorParams& sensor) {
  FilterParams p;
  p.max_time = sensor.max_echo_time();
  p.ping_period = sensor.ping_period;
  return p;
}

void FilterParams::validate() const {
  if (!(g > 0.0 && g < 1.0)) throw InputError("filter.g: must be in (0, 1)");
  if (!(dt_hysteresis > 0.0)) throw InputError("filter.dt_hysteresis: must be > 0");
  if (!(max_time > 0.0) || !std::isfinite(max_time)) throw InputError("filter.max_time: must be > 0");
  if (miss_reset_count < 1) throw InputError("filter.miss_reset_count: must be >= 1");
  if (!(ping_period > 0.0)) throw InputError("filter.ping_period: must be > 0");
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Approaching: return "Approaching";
    case Classification::Leaving: return "Leaving";
    case Classification::Steady: return "Steady";
    case Classification::NoTarget: return "NoTarget";
  }
  return "NoTarget";
}

FilterState filter_init(const FilterParams& params) {
  params.validate();
  return {params.max_time, 0.0, 0, false};
}

Classification classify(const FilterState& state, const FilterParams& params) {
  if (!state.locked) return Classification::NoTarget;
  if (state.avg_dt < -params.dt_hysteresis) return Classification::Approaching;
  if (state.avg_dt > params.dt_hysteresis) return Classification::Leaving;
  return Classification::Steady;
}

FilterOutput filter_step(const FilterState& state, std::optional<double> echo, const FilterParams& params) {
  FilterState next = state;
  if (!echo) {
    next.consecutive_misses += 1;
    if (next.consecutive_misses >= params.miss_reset_count) {
      next = {params.max_time, 0.0, 0, false};
      return {next, Classification::NoTarget};
    }
    return {next, classify(next, params)};
  }

  const double echo_time = *echo;
  if (!(echo_time > 0.0 && echo_time <= params.max_time)) {
    throw InputError("filter_step: echo time " + std::to_string(echo_time) + " outside (0, max_time]");
  }
  next.consecutive_misses = 0;
  if (!next.locked) {
    next.avg_time = echo_time;
    next.avg_dt = 0.0;
    next.locked = true;
  } else {
    const double prev_avg_time = next.avg_time;
    next.avg_time = next.avg_time * params.g + (1.0 - params.g) * echo_time;
    next.avg_dt = next.avg_dt * params.g + (1.0 - params.g) * (next.avg_time - prev_avg_time);
  }
  return {next, classify(next, params)};
}

std::vector<Classification> classify_stream(std::span<const std::optional<double>> echoes,
                                            const FilterParams& params) {
  std::vector<Classification> out;
  out.reserve(echoes.size());
  auto state = filter_init(params);
  for (const auto& echo : echoes) {
    auto step = filter_step(state, echo, params);
    state = step.state;
    out.push_back(step.classification);
  }
  return out;
}

std::vector<std::optional<double>> read_echo_stream(std::istream& in) {
  std::vector<std::optional<double>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s(line);
    const auto hash = s.find('#');
    if (hash != std::string_view::npos) s = s.substr(0, hash);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) continue;
    if (s == "-") {
      out.emplace_back(std::nullopt);
      continue;
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ParseError("echo stream: expected seconds or '-', got '" + std::string(s) + "'", lineno);
    }
    out.emplace_back(v);
  }
  return out;
}

}  // namespace sonarnav
