#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sonarnav/errors.hpp"
#include "sonarnav/robot.hpp"

using namespace sonarnav;
using std::numbers::pi;

namespace {

bool in_wrap_range(double a) { return a > -pi && a <= pi; }

void check_close(const Pose& a, const Pose& b, double tol) {
  CHECK(std::abs(a.x - b.x) < tol);
  CHECK(std::abs(a.y - b.y) < tol);
  CHECK(std::abs(wrap_angle(a.theta - b.theta)) < tol);
}

}  // namespace

TEST_SUITE("robot") {

TEST_CASE("kinematics examples") {
  const Pose p0{0, 0, 0};
  CHECK(step_kinematics(Pose{1.5, -2, 0.3}, 0, 0, 0.7) == Pose{1.5, -2, 0.3});
  check_close(step_kinematics(p0, 1, 0, 1), Pose{1, 0, 0}, 1e-15);
  check_close(step_kinematics(p0, 0, pi / 2, 1), Pose{0, 0, pi / 2}, 1e-15);
  // Quarter circle of radius 1.
  check_close(step_kinematics(p0, pi / 2, pi / 2, 1), Pose{1, 1, pi / 2}, 1e-12);
  CHECK_THROWS_AS(step_kinematics(p0, 1, 0, 0), InputError);
  CHECK_THROWS_AS(step_kinematics(p0, 1, 0, -0.1), InputError);
}

TEST_CASE("arc converges to the straight line") {
  const Pose p{0.4, -0.3, 1.1};
  const double v = 0.8, dt = 0.5;
  const Pose arc = step_kinematics(p, v, 1e-12, dt);
  const Pose line{p.x + v * dt * std::cos(p.theta), p.y + v * dt * std::sin(p.theta), p.theta};
  check_close(arc, line, 1e-9);
  // Just above the straight-branch cutoff the arc formula is still used.
  check_close(step_kinematics(p, v, 1e-7, dt), line, 1e-7);
}

TEST_CASE("composition and wrapping") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> v(-1, 1), w(-3, 3), dt(0.01, 2.0), ang(-pi, pi);
  for (int i = 0; i < 500; ++i) {
    const Pose p{v(rng), v(rng), ang(rng)};
    const double vv = v(rng), ww = w(rng), t = dt(rng);
    const Pose once = step_kinematics(p, vv, ww, t);
    const Pose twice = step_kinematics(step_kinematics(p, vv, ww, t / 2), vv, ww, t / 2);
    check_close(once, twice, 1e-12);
    CHECK(in_wrap_range(once.theta));
    CHECK(in_wrap_range(twice.theta));
  }
  CHECK(in_wrap_range(step_kinematics(Pose{0, 0, pi - 0.01}, 0, 1, 0.02).theta));
  CHECK(step_kinematics(Pose{0, 0, pi - 0.01}, 0, 1, 0.02).theta < 0);
}

TEST_CASE("odometry noise") {
  const Displacement d{0.02, 0.1};
  SUBCASE("zero noise is the identity") {
    Rng rng(1);
    OdometryParams quiet{0, 0};
    CHECK(odometry_step(d, quiet, rng) == d);
  }
  SUBCASE("same seed, same draws") {
    OdometryParams p;
    Rng a(77), b(77);
    for (int i = 0; i < 50; ++i) CHECK(odometry_step(d, p, a) == odometry_step(d, p, b));
  }
  SUBCASE("no rotation, no rotational error") {
    OdometryParams p{0.05, 0.5};
    Rng rng(3);
    for (int i = 0; i < 50; ++i) CHECK(odometry_step({0.02, 0.0}, p, rng).rotation == 0.0);
  }
  SUBCASE("two draws per call regardless of input") {
    OdometryParams p;
    Rng a(5), b(5);
    odometry_step({0, 0}, p, a);
    odometry_step(d, p, b);
    CHECK(a() == b());
  }
  SUBCASE("error scales with the motion") {
    OdometryParams p{0.1, 0.1};
    Rng rng(12);
    double sum_sq = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      const auto out = odometry_step({1.0, 1.0}, p, rng);
      sum_sq += (out.distance - 1.0) * (out.distance - 1.0);
    }
    CHECK(std::sqrt(sum_sq / n) == doctest::Approx(0.1).epsilon(0.05));
  }
  CHECK_THROWS_AS((OdometryParams{-0.1, 0}.validate()), ValidationError);
}

TEST_CASE("dead reckoning without noise tracks the truth") {
  std::mt19937_64 cmd(4);
  std::uniform_real_distribution<double> v(0, 0.3), w(-1, 1);
  Rng rng(0);
  const OdometryParams quiet{0, 0};
  Pose truth{1, 2, 0.5}, odom = truth;
  for (int i = 0; i < 2000; ++i) {
    const double vv = v(cmd), ww = i % 7 ? w(cmd) : 0.0;
    truth = step_kinematics(truth, vv, ww, 0.1);
    odom = apply_displacement(odom, odometry_step({vv * 0.1, ww * 0.1}, quiet, rng));
  }
  check_close(odom, truth, 1e-9);
}

}  // TEST_SUITE
