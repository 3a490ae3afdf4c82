#pragma once

// Independent line-by-line rendering of the echo-motion loop, kept apart from
// the library so the two can be compared. The sentinel is tested with float
// equality exactly as written, and a reset only restores avg_time.

#include <optional>

#include "sonarnav/motion_filter.hpp"

namespace oracle {

struct TranscribedFilter {
  double g;
  double max_time;
  double dt_hysteresis;
  int reset_after;

  double avg_time;
  double avg_dt = 0.0;
  int no_echo = 0;

  TranscribedFilter(double g_, double max_time_, double hysteresis, int reset)
      : g(g_), max_time(max_time_), dt_hysteresis(hysteresis), reset_after(reset), avg_time(max_time_) {}

  sonarnav::Classification report() const {
    if (avg_time == max_time) return sonarnav::Classification::NoTarget;
    if (avg_dt < -dt_hysteresis) return sonarnav::Classification::Approaching;
    if (avg_dt > +dt_hysteresis) return sonarnav::Classification::Leaving;
    return sonarnav::Classification::Steady;
  }

  sonarnav::Classification tick(std::optional<double> reading) {
    if (!reading) {
      if (++no_echo >= reset_after) {
        avg_time = max_time;
        no_echo = 0;
        return sonarnav::Classification::NoTarget;
      }
      return report();
    }
    no_echo = 0;
    const double echo_time = *reading;
    if (avg_time == max_time) {
      avg_time = echo_time;
      avg_dt = 0.0;
    } else {
      const double prev_avg_time = avg_time;
      avg_time = avg_time * g + (1.0 - g) * echo_time;
      avg_dt = avg_dt * g + (1.0 - g) * (avg_time - prev_avg_time);
    }
    return report();
  }
};

}  // namespace oracle
