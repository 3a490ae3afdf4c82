#pragma once

#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "sonarnav/geometry.hpp"
#include "sonarnav/world.hpp"

namespace sonarnav {

/// Random stream used for every stochastic draw in the simulator.
using Rng = std::mt19937_64;

struct SensorParams {
  double max_range = 3.0;                      // m
  double sweep_min = -std::numbers::pi / 2.0;  // rad, relative to robot X axis
  double sweep_max = std::numbers::pi / 2.0;
  int beam_count = 181;
  double speed_of_sound = 343.0;   // m/s, dry air at 20 C
  double pulse_frequency = 40000;  // Hz, metadata only
  double noise_sigma = 0.0;        // m
  double dropout_prob = 0.0;
  double ping_period = 0.050;  // s

  /// Longest representable round trip, 2 * max_range / c.
  double max_echo_time() const { return 2.0 * max_range / speed_of_sound; }

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

struct EchoMeasurement {
  double bearing = 0.0;               // rad, relative to robot X axis
  std::optional<double> echo_time;    // s, round trip; empty = no echo

  friend bool operator==(const EchoMeasurement&, const EchoMeasurement&) = default;
};

/// Round-trip travel time for a target at distance `d`.
double echo_time_from_distance(double d, double speed_of_sound);

/// Target distance for a measured round-trip time `t`.
double distance_from_echo_time(double t, double speed_of_sound);

/// Beam bearings, evenly spaced over [sweep_min, sweep_max] with both ends included.
/// A single beam points at the middle of the range.
std::vector<double> beam_bearings(const SensorParams& params);

/// One acquisition over the sweep fan from `pose`.
///
/// Each beam is an ideal ray cast. A hit distance receives additive Gaussian
/// noise, is clamped to (0, max_range], and is then converted to echo time;
/// independently the echo is dropped with probability `dropout_prob`. Every
/// beam consumes exactly one normal and one uniform draw, hit or miss, so the
/// generator advances identically regardless of the world.
std::vector<EchoMeasurement> sweep(const World& world, const Pose& pose,
                                   const SensorParams& params, Rng& rng);

/// Flight time of a projectile launched at speed `u` and elevation `theta`
/// under gravity `g`. Negative elevations yield 0.
double projectile_time_of_flight(double u, double theta, double g);

}  // namespace sonarnav
