#include "sonarnav/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sonarnav/errors.hpp"

namespace sonarnav {
namespace {

// Smallest reportable range; keeps noisy echoes strictly positive.
constexpr double kMinRange = 1e-6;

}  // namespace

void SensorParams::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("sensor." + msg); };
  if (!(max_range > 0.0) || !std::isfinite(max_range)) fail("max_range: must be > 0");
  if (!(sweep_min < sweep_max)) fail("sweep_min: must be < sweep_max");
  if (beam_count < 1) fail("beam_count: must be >= 1");
  if (!(speed_of_sound > 0.0)) fail("speed_of_sound: must be > 0");
  if (!(pulse_frequency > 0.0)) fail("pulse_frequency: must be > 0");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma: must be >= 0");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) fail("dropout_prob: must be in [0, 1]");
  if (!(ping_period > 0.0)) fail("ping_period: must be > 0");
}

double echo_time_from_distance(double d, double speed_of_sound) {
  if (!(speed_of_sound > 0.0)) throw InputError("echo_time_from_distance: speed of sound must be > 0");
  if (!(d >= 0.0)) throw InputError("echo_time_from_distance: distance must be >= 0");
  return 2.0 * d / speed_of_sound;
}

double distance_from_echo_time(double t, double speed_of_sound) {
  if (!(speed_of_sound > 0.0)) throw InputError("distance_from_echo_time: speed of sound must be > 0");
  if (!(t >= 0.0)) throw InputError("distance_from_echo_time: time must be >= 0");
  return speed_of_sound * t / 2.0;
}

std::vector<double> beam_bearings(const SensorParams& params) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(params.beam_count));
  if (params.beam_count == 1) {
    out.push_back(0.5 * (params.sweep_min + params.sweep_max));
    return out;
  }
  const double span = params.sweep_max - params.sweep_min;
  const int last = params.beam_count - 1;
  for (int i = 0; i < params.beam_count; ++i) {
    // Last beam pinned so the endpoint is exact.
    out.push_back(i == last ? params.sweep_max : params.sweep_min + span * i / last);
  }
  return out;
}

std::vector<EchoMeasurement> sweep(const World& world, const Pose& pose,
                                   const SensorParams& params, Rng& rng) {
  params.validate();
  if (!world.bounds().contains(pose.position())) throw InputError("sweep: pose outside world bounds");

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<EchoMeasurement> out;
  out.reserve(static_cast<std::size_t>(params.beam_count));
  for (const double bearing : beam_bearings(params)) {
    const double z = gauss(rng);
    const double u = unit(rng);
    EchoMeasurement m{bearing, std::nullopt};
    const auto hit = world.ray_cast(pose.position(), unit_from_angle(pose.theta + bearing), params.max_range);
    if (hit && u >= params.dropout_prob) {
      const double noisy = std::clamp(*hit + params.noise_sigma * z, kMinRange, params.max_range);
      m.echo_time = echo_time_from_distance(noisy, params.speed_of_sound);
    }
    out.push_back(m);
  }
  return out;
}

double projectile_time_of_flight(double u, double theta, double g) {
  if (!(g > 0.0)) throw InputError("projectile_time_of_flight: g must be > 0");
  if (!(u >= 0.0)) throw InputError("projectile_time_of_flight: launch speed must be >= 0");
  return std::max(0.0, 2.0 * u * std::sin(theta) / g);
}

}  // namespace sonarnav
