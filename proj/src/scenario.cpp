#include "sonarnav/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>
#include <variant>

#include "sonarnav/errors.hpp"
#include "yaml_util.hpp"

namespace sonarnav {
namespace {

using namespace detail;

void parse_robot(const YAML::Node& node, Scenario& s) {
  require_map(node, "robot");
  check_keys(node, "robot", {"start", "goal", "speed", "trans_noise_sigma", "rot_noise_sigma"});
  const auto start = number_list(require(node, "robot", "start"), "robot.start", 3);
  s.start = {start[0], start[1], wrap_angle(start[2])};
  s.goal = vec2(require(node, "robot", "goal"), "robot.goal");
  s.robot_speed = get_or(node, "robot", "speed", s.robot_speed);
  s.odometry.trans_noise_sigma = get_or(node, "robot", "trans_noise_sigma", s.odometry.trans_noise_sigma);
  s.odometry.rot_noise_sigma = get_or(node, "robot", "rot_noise_sigma", s.odometry.rot_noise_sigma);
}

void parse_sensor(const YAML::Node& node, SensorParams& p) {
  require_map(node, "sensor");
  check_keys(node, "sensor",
             {"max_range", "sweep_min", "sweep_max", "beam_count", "speed_of_sound", "pulse_frequency",
              "noise_sigma", "dropout_prob", "ping_period"});
  p.max_range = get_or(node, "sensor", "max_range", p.max_range);
  p.sweep_min = get_or(node, "sensor", "sweep_min", p.sweep_min);
  p.sweep_max = get_or(node, "sensor", "sweep_max", p.sweep_max);
  p.beam_count = get_or(node, "sensor", "beam_count", p.beam_count);
  p.speed_of_sound = get_or(node, "sensor", "speed_of_sound", p.speed_of_sound);
  p.pulse_frequency = get_or(node, "sensor", "pulse_frequency", p.pulse_frequency);
  p.noise_sigma = get_or(node, "sensor", "noise_sigma", p.noise_sigma);
  p.dropout_prob = get_or(node, "sensor", "dropout_prob", p.dropout_prob);
  p.ping_period = get_or(node, "sensor", "ping_period", p.ping_period);
}

void parse_planner(const YAML::Node& node, PlannerParams& p) {
  require_map(node, "planner");
  check_keys(node, "planner",
             {"k_att", "k_rep", "rho0", "step_size", "goal_tol", "max_steps", "occ_threshold", "min_progress",
              "progress_window"});
  p.k_att = get_or(node, "planner", "k_att", p.k_att);
  p.k_rep = get_or(node, "planner", "k_rep", p.k_rep);
  p.rho0 = get_or(node, "planner", "rho0", p.rho0);
  p.step_size = get_or(node, "planner", "step_size", p.step_size);
  p.goal_tol = get_or(node, "planner", "goal_tol", p.goal_tol);
  p.max_steps = get_or(node, "planner", "max_steps", p.max_steps);
  p.occ_threshold = get_or(node, "planner", "occ_threshold", p.occ_threshold);
  p.min_progress = get_or(node, "planner", "min_progress", p.min_progress);
  p.progress_window = get_or(node, "planner", "progress_window", p.progress_window);
}

void parse_mapping(const YAML::Node& node, Scenario& s) {
  require_map(node, "mapping");
  check_keys(node, "mapping",
             {"resolution", "cone_half_angle", "l_occ", "l_free", "occupied_band", "l_min", "l_max", "mode"});
  s.grid_resolution = get_or(node, "mapping", "resolution", s.grid_resolution);
  auto& m = s.model;
  m.cone_half_angle = get_or(node, "mapping", "cone_half_angle", m.cone_half_angle);
  m.l_occ = get_or(node, "mapping", "l_occ", m.l_occ);
  m.l_free = get_or(node, "mapping", "l_free", m.l_free);
  if (node["occupied_band"]) m.occupied_band = scalar<double>(node["occupied_band"], "mapping.occupied_band");
  s.limits.min = get_or(node, "mapping", "l_min", s.limits.min);
  s.limits.max = get_or(node, "mapping", "l_max", s.limits.max);
  if (const auto mode = node["mode"]) {
    const auto v = scalar<std::string>(mode, "mapping.mode");
    if (v == "ray") {
      m.mode = UpdateMode::Ray;
    } else if (v == "cone") {
      m.mode = UpdateMode::Cone;
    } else {
      throw ParseError("mapping.mode: expected 'ray' or 'cone', got '" + v + "'", line_of(mode));
    }
  }
}

void parse_sim(const YAML::Node& node, Scenario& s) {
  require_map(node, "sim");
  check_keys(node, "sim", {"seed", "max_steps", "sweep_every", "control_dt", "replan_map"});
  s.seed = get_or(node, "sim", "seed", s.seed);
  s.max_sim_steps = get_or(node, "sim", "max_steps", s.max_sim_steps);
  s.sweep_every = get_or(node, "sim", "sweep_every", s.sweep_every);
  s.control_dt = get_or(node, "sim", "control_dt", s.control_dt);
  if (const auto rm = node["replan_map"]) {
    const auto v = scalar<std::string>(rm, "sim.replan_map");
    if (v == "global") {
      s.replan_map = ReplanMap::Global;
    } else if (v == "local") {
      s.replan_map = ReplanMap::Local;
    } else {
      throw ParseError("sim.replan_map: expected 'global' or 'local', got '" + v + "'", line_of(rm));
    }
  }
}

YAML::Node point_node(double x, double y) {
  YAML::Node n(YAML::NodeType::Sequence);
  n.SetStyle(YAML::EmitterStyle::Flow);
  n.push_back(x);
  n.push_back(y);
  return n;
}

}  // namespace

void Scenario::validate() const {
  sensor.validate();
  planner.validate();
  odometry.validate();
  model.validate();
  if (!(limits.min < 0.0 && limits.max > 0.0)) throw ValidationError("mapping.l_min/l_max: must bracket 0");
  if (!(grid_resolution > 0.0)) throw ValidationError("mapping.resolution: must be > 0");
  if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(start.theta) ||
      !world.bounds().contains(start.position())) {
    throw ValidationError("robot.start: must lie inside world bounds");
  }
  if (!std::isfinite(goal.x) || !std::isfinite(goal.y) || !world.bounds().contains(goal)) {
    throw ValidationError("robot.goal: must lie inside world bounds");
  }
  if (!(robot_speed > 0.0)) throw ValidationError("robot.speed: must be > 0");
  if (max_sim_steps < 0) throw ValidationError("sim.max_steps: must be >= 0");
  if (sweep_every < 1) throw ValidationError("sim.sweep_every: must be >= 1");
  if (!(control_dt > 0.0)) throw ValidationError("sim.control_dt: must be > 0");
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1);
  }
  require_map(root, "scenario");
  check_keys(root, "scenario", {"world", "robot", "sensor", "planner", "mapping", "sim"});

  Scenario s;
  s.world = world_from_yaml(require(root, "scenario", "world"));
  parse_robot(require(root, "scenario", "robot"), s);
  if (root["sensor"]) parse_sensor(root["sensor"], s.sensor);
  if (root["planner"]) parse_planner(root["planner"], s.planner);
  if (root["mapping"]) parse_mapping(root["mapping"], s);
  if (root["sim"]) parse_sim(root["sim"], s);
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string to_yaml(const Scenario& s) {
  YAML::Node root;

  auto& world = s.world;
  YAML::Node w;
  w["bounds"]["min"] = point_node(world.bounds().min.x, world.bounds().min.y);
  w["bounds"]["max"] = point_node(world.bounds().max.x, world.bounds().max.y);
  w["obstacles"] = YAML::Node(YAML::NodeType::Sequence);
  for (const auto& obstacle : world.obstacles()) {
    YAML::Node item;
    if (const auto* seg = std::get_if<Segment>(&obstacle)) {
      item["segment"]["from"] = point_node(seg->a.x, seg->a.y);
      item["segment"]["to"] = point_node(seg->b.x, seg->b.y);
    } else if (const auto* c = std::get_if<Circle>(&obstacle)) {
      item["circle"]["center"] = point_node(c->center.x, c->center.y);
      item["circle"]["radius"] = c->radius;
    } else if (const auto* r = std::get_if<Rect>(&obstacle)) {
      item["rect"]["min"] = point_node(r->box.min.x, r->box.min.y);
      item["rect"]["max"] = point_node(r->box.max.x, r->box.max.y);
    }
    w["obstacles"].push_back(item);
  }
  root["world"] = w;

  YAML::Node start(YAML::NodeType::Sequence);
  start.SetStyle(YAML::EmitterStyle::Flow);
  start.push_back(s.start.x);
  start.push_back(s.start.y);
  start.push_back(s.start.theta);
  root["robot"]["start"] = start;
  root["robot"]["goal"] = point_node(s.goal.x, s.goal.y);
  root["robot"]["speed"] = s.robot_speed;
  root["robot"]["trans_noise_sigma"] = s.odometry.trans_noise_sigma;
  root["robot"]["rot_noise_sigma"] = s.odometry.rot_noise_sigma;

  const auto& se = s.sensor;
  root["sensor"]["max_range"] = se.max_range;
  root["sensor"]["sweep_min"] = se.sweep_min;
  root["sensor"]["sweep_max"] = se.sweep_max;
  root["sensor"]["beam_count"] = se.beam_count;
  root["sensor"]["speed_of_sound"] = se.speed_of_sound;
  root["sensor"]["pulse_frequency"] = se.pulse_frequency;
  root["sensor"]["noise_sigma"] = se.noise_sigma;
  root["sensor"]["dropout_prob"] = se.dropout_prob;
  root["sensor"]["ping_period"] = se.ping_period;

  const auto& p = s.planner;
  root["planner"]["k_att"] = p.k_att;
  root["planner"]["k_rep"] = p.k_rep;
  root["planner"]["rho0"] = p.rho0;
  root["planner"]["step_size"] = p.step_size;
  root["planner"]["goal_tol"] = p.goal_tol;
  root["planner"]["max_steps"] = p.max_steps;
  root["planner"]["occ_threshold"] = p.occ_threshold;
  root["planner"]["min_progress"] = p.min_progress;
  root["planner"]["progress_window"] = p.progress_window;

  root["mapping"]["resolution"] = s.grid_resolution;
  root["mapping"]["cone_half_angle"] = s.model.cone_half_angle;
  root["mapping"]["l_occ"] = s.model.l_occ;
  root["mapping"]["l_free"] = s.model.l_free;
  root["mapping"]["occupied_band"] = s.model.band(s.grid_resolution);
  root["mapping"]["l_min"] = s.limits.min;
  root["mapping"]["l_max"] = s.limits.max;
  root["mapping"]["mode"] = s.model.mode == UpdateMode::Ray ? "ray" : "cone";

  root["sim"]["seed"] = s.seed;
  root["sim"]["max_steps"] = s.max_sim_steps;
  root["sim"]["sweep_every"] = s.sweep_every;
  root["sim"]["control_dt"] = s.control_dt;
  root["sim"]["replan_map"] = s.replan_map == ReplanMap::Global ? "global" : "local";

  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace sonarnav
