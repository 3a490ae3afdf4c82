#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sonarnav/sensor.hpp"

namespace sonarnav {

/// Approach/leave detector over a fixed-rate ping stream.
///
/// The echo delay is low-pass filtered with coefficient g; its per-tick
/// change is filtered again and compared against a symmetric hysteresis band.
/// After `miss_reset_count` consecutive silent pings the filter forgets its
/// history and waits for a fresh echo.
struct FilterParams {
  double g = 0.9;
  double dt_hysteresis = 0.01;                    // s
  double max_time = 2.0 * 3.0 / 343.0;            // s, "no echo" sentinel
  int miss_reset_count = 10;
  double ping_period = 0.050;                     // s, metadata

  /// max_time taken from the sensor's longest round trip.
  static FilterParams for_sensor(const SensorParams& sensor);

  void validate() const;
};

struct FilterState {
  double avg_time = 0.0;  // s
  double avg_dt = 0.0;    // s per tick
  int consecutive_misses = 0;
  bool locked = false;    // false while avg_time holds the max_time sentinel

  friend bool operator==(const FilterState&, const FilterState&) = default;
};

enum class Classification { Approaching, Leaving, Steady, NoTarget };

const char* to_string(Classification c);

FilterState filter_init(const FilterParams& params);

Classification classify(const FilterState& state, const FilterParams& params);

struct FilterOutput {
  FilterState state;
  Classification classification;
};

/// One ping. `echo` empty = no echo; otherwise it must lie in (0, max_time].
FilterOutput filter_step(const FilterState& state, std::optional<double> echo, const FilterParams& params);

std::vector<Classification> classify_stream(std::span<const std::optional<double>> echoes,
                                            const FilterParams& params);

/// One tick per line: decimal seconds, or `-` for no echo. Blank lines and
/// `#` comments are skipped.
std::vector<std::optional<double>> read_echo_stream(std::istream& in);

}  // namespace sonarnav
