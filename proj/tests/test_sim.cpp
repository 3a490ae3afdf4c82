#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sonarnav/errors.hpp"
#include "sonarnav/sim.hpp"

using namespace sonarnav;
namespace fs = std::filesystem;

namespace {

Scenario quiet_room(Vec2 goal) {
  Scenario s;
  s.world = World(Box{{0, 0}, {10, 10}});
  s.start = {1, 1, 0};
  s.goal = goal;
  s.odometry = {0, 0};
  s.seed = 42;
  return s;
}

Scenario sealed() {
  Scenario s = quiet_room({6.5, 6.5});
  s.world = World(Box{{0, 0}, {10, 10}}, {Segment{{5, 5}, {8, 5}}, Segment{{8, 5}, {8, 8}},
                                         Segment{{8, 8}, {5, 8}}, Segment{{5, 8}, {5, 5}}});
  s.start = {2, 6.5, 0};
  s.seed = 3;
  return s;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("pursuit controller") {
  const Pose p{0, 0, 0};
  const auto ahead = pursue_waypoint(p, {1, 0}, 0.2, 0.1);
  CHECK(ahead.v == 0.2);
  CHECK(ahead.omega == doctest::Approx(0.0));
  const auto behind = pursue_waypoint(p, {-1, 0}, 0.2, 0.1);
  CHECK(behind.v == 0.0);
  CHECK(std::abs(behind.omega) == 1.0);
  const auto slight = pursue_waypoint(p, {std::cos(0.02), std::sin(0.02)}, 0.2, 0.1);
  CHECK(slight.v == 0.2);
  CHECK(slight.omega == doctest::Approx(0.4).epsilon(1e-9));
  const auto right = pursue_waypoint(p, {0, -1}, 0.2, 0.1);
  CHECK(right.omega == -1.0);
}

TEST_CASE("start at the goal") {
  auto s = quiet_room({1.05, 1.0});
  const auto r = run(s);
  CHECK(r.reached_goal);
  CHECK(r.steps == 0);
  CHECK(r.true_trajectory.size() == 1);
  CHECK(r.odom_trajectory.size() == 1);
  CHECK(r.fusions == 1);
}

TEST_CASE("empty room without noise") {
  const auto s = quiet_room({8, 8});
  const auto r = run(s);
  REQUIRE(r.reached_goal);
  CHECK_FALSE(r.failure_reason);
  CHECK(r.true_trajectory.size() == static_cast<std::size_t>(r.steps) + 1);
  CHECK(distance(r.true_trajectory.back().position(), s.goal) <= s.planner.goal_tol);
  // Odometry is exact, so the two trajectories coincide.
  for (std::size_t i = 0; i < r.true_trajectory.size(); ++i) CHECK(r.true_trajectory[i] == r.odom_trajectory[i]);
  // Once the robot first drives forward it never gets further from the goal.
  std::size_t lock = 1;
  while (lock < r.true_trajectory.size() && r.true_trajectory[lock].position() == r.true_trajectory[0].position()) ++lock;
  for (std::size_t i = lock + 1; i < r.true_trajectory.size(); ++i)
    CHECK(distance(r.true_trajectory[i].position(), s.goal) <= distance(r.true_trajectory[i - 1].position(), s.goal) + 1e-12);
}

TEST_CASE("sealed goal fails honestly") {
  const auto s = sealed();
  const auto r = run(s);
  CHECK_FALSE(r.reached_goal);
  REQUIRE(r.failure_reason);
  CHECK(*r.failure_reason == SimFailure::LocalMinimum);
  CHECK(std::string(to_string(*r.failure_reason)) == "local_minimum");
  const auto& g = r.final_global_map;
  int positive = 0;
  for (double y = 5.55; y < 7.5; y += 0.1) {
    const auto c = g.cell_of({5.0, y});
    REQUIRE(c);
    if (g.at(c->ix, c->iy) > 0) ++positive;
  }
  CHECK(positive >= 15);
}

TEST_CASE("determinism and map monotonicity") {
  Scenario s = quiet_room({8, 3});
  s.world = s.world.with_obstacle(Circle{{4.5, 2.0}, 0.6});
  s.sensor.noise_sigma = 0.02;
  s.sensor.dropout_prob = 0.05;
  s.odometry = {0.01, 0.01};
  s.seed = 11;

  std::vector<std::size_t> known;
  std::vector<OccupancyGrid> maps;
  const auto a = run(s, [&](int index, const OccupancyGrid& g) {
    CHECK(index == static_cast<int>(known.size()));
    known.push_back(g.known_cells());
    maps.push_back(g);
  });
  const auto b = run(s);
  CHECK(trajectory_csv(a) == trajectory_csv(b));
  CHECK(a.final_global_map == b.final_global_map);
  CHECK(a.fusions == static_cast<int>(known.size()));
  for (std::size_t i = 1; i < known.size(); ++i) CHECK(known[i] >= known[i - 1]);

  s.seed = 12;
  CHECK(trajectory_csv(run(s)) != trajectory_csv(a));

  SUBCASE("saved maps reload") {
    const auto dir = fs::temp_directory_path() / "sonarnav_tests";
    fs::create_directories(dir);
    for (std::size_t i = 0; i < maps.size(); i += 5) {
      const auto csv = dir / "sim_map.csv";
      save_map(maps[i], csv);
      const auto back = load_map(csv);
      CHECK(back == maps[i]);
      for (double l : back.cells()) CHECK((l >= -6.0 && l <= 6.0));
      const auto pgm = dir / "sim_map.pgm";
      save_map(maps[i], pgm);
      CHECK(load_map(pgm).width() == maps[i].width());
    }
  }
}

TEST_CASE("trajectory csv") {
  const auto r = run(quiet_room({1.05, 1.0}));
  CHECK(trajectory_csv(r) == "step,true_x,true_y,true_theta,odom_x,odom_y,odom_theta\n0,1,1,0,1,1,0\n");
}

TEST_CASE("step budget and invalid scenarios") {
  auto s = quiet_room({8, 8});
  s.max_sim_steps = 30;
  const auto r = run(s);
  CHECK_FALSE(r.reached_goal);
  REQUIRE(r.failure_reason);
  CHECK(*r.failure_reason == SimFailure::StepBudget);
  CHECK(r.steps == 30);

  s.goal = {20, 20};
  CHECK_THROWS_AS(run(s), ValidationError);
}

}  // TEST_SUITE
