#include <doctest.h>

#include <string>

#include "sonarnav/errors.hpp"
#include "sonarnav/scenario.hpp"

using namespace sonarnav;

namespace {

const char* kMinimal = R"(world:
  bounds: {min: [0, 0], max: [10, 10]}
  obstacles:
    - circle: {center: [5, 5], radius: 0.5}
robot:
  start: [1, 1, 0]
  goal: [8, 8]
)";

template <typename Error>
std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal document takes defaults") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.world.obstacles().size() == 1);
  CHECK(s.start == Pose{1, 1, 0});
  CHECK(s.goal == Vec2{8, 8});
  CHECK(s.sensor.beam_count == 181);
  CHECK(s.sensor.max_range == 3.0);
  CHECK(s.planner.rho0 == 0.5);
  CHECK(s.grid_resolution == 0.1);
  CHECK(s.sweep_every == 10);
  CHECK(s.replan_map == ReplanMap::Global);
  CHECK(s.model.mode == UpdateMode::Ray);
}

TEST_CASE("sections override defaults") {
  const auto s = parse_scenario(std::string(kMinimal) + R"(sensor:
  beam_count: 91
  noise_sigma: 0.02
planner:
  k_rep: 0.8
mapping:
  resolution: 0.05
  mode: cone
  occupied_band: 0.15
sim:
  seed: 99
  replan_map: local
)");
  CHECK(s.sensor.beam_count == 91);
  CHECK(s.sensor.noise_sigma == 0.02);
  CHECK(s.planner.k_rep == 0.8);
  CHECK(s.grid_resolution == 0.05);
  CHECK(s.model.mode == UpdateMode::Cone);
  CHECK(s.model.occupied_band == 0.15);
  CHECK(s.seed == 99);
  CHECK(s.replan_map == ReplanMap::Local);
}

TEST_CASE("canonical form round trips") {
  const auto s = parse_scenario(std::string(kMinimal) + "sensor:\n  noise_sigma: 0.1\nsim:\n  seed: 18446744073709551615\n");
  const auto text = to_yaml(s);
  const auto back = parse_scenario(text);
  CHECK(to_yaml(back) == text);
  CHECK(back.seed == 18446744073709551615ULL);
  CHECK(back.sensor.sweep_min == s.sensor.sweep_min);
  CHECK(back.world.obstacles().size() == 1);
}

TEST_CASE("malformed documents") {
  SUBCASE("unknown key reports its line") {
    try {
      parse_scenario(std::string(kMinimal) + "sensor:\n  beams: 3\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 9);
      CHECK(std::string(e.what()).find("beams") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(parse_scenario("robot:\n  start: [1, 1, 0]\n  goal: [2, 2]\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("world: [1, 2\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "sim:\n  replan_map: sometimes\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario(std::string(kMinimal) + "sensor:\n  beam_count: many\n"), ParseError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.yaml"), IoError);
}

TEST_CASE("invariant violations name the field") {
  const std::string head = R"(world:
  bounds: {min: [0, 0], max: [10, 10]}
robot:
  start: [1, 1, 0]
)";
  CHECK(message_of<ValidationError>(head + "  goal: [12, 8]\n").find("robot.goal") != std::string::npos);
  CHECK(message_of<ValidationError>(head + "  goal: [8, 8]\nsensor:\n  max_range: -1\n").find("sensor.max_range") !=
        std::string::npos);
  CHECK(message_of<ValidationError>(head + "  goal: [8, 8]\nsim:\n  sweep_every: 0\n").find("sim.sweep_every") !=
        std::string::npos);
  CHECK(message_of<ValidationError>(head + "  goal: [8, 8]\nplanner:\n  goal_tol: 0\n").find("planner.goal_tol") !=
        std::string::npos);
}

TEST_CASE("committed example scenarios load") {
  for (const char* name : {"empty_room.yaml", "corridor.yaml", "sealed_goal.yaml"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_scenario(std::string(SONARNAV_SCENARIO_DIR) + "/" + name));
  }
}

}  // TEST_SUITE
