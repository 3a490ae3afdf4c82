// sonarnav: run ultrasonic navigation scenarios, classify echo streams,
// convert occupancy maps.
//
// Exit codes: 0 success, 1 usage or validation error, 2 navigation failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sonarnav/errors.hpp"
#include "sonarnav/motion_filter.hpp"
#include "sonarnav/occupancy_grid.hpp"
#include "sonarnav/scenario.hpp"
#include "sonarnav/sim.hpp"

namespace fs = std::filesystem;
using namespace sonarnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNavigation = 2;

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string map_format = "both";
};

struct FilterArgs {
  std::string in;
  std::string out;
  std::string scenario;
  FilterParams params;
};

struct MapconvArgs {
  std::string in;
  std::string out;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("write failed for '" + path.string() + "'");
}

int cmd_run(const RunArgs& args) {
  auto scenario = load_scenario(args.scenario);
  if (args.seed) scenario.seed = *args.seed;

  const fs::path out_dir = args.out_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  const bool csv = args.map_format != "pgm";
  const bool pgm = args.map_format != "csv";
  const auto result = run(scenario, [&](int k, const OccupancyGrid& global) {
    const auto stem = out_dir / ("global_map_" + std::to_string(k));
    if (csv) save_map(global, stem.string() + ".csv", MapFormat::Csv);
    if (pgm) save_map(global, stem.string() + ".pgm", MapFormat::Pgm);
  });
  write_text(out_dir / "trajectory.csv", trajectory_csv(result));

  std::cout << "reached_goal: " << (result.reached_goal ? "true" : "false") << '\n'
            << "steps: " << result.steps << '\n'
            << "map_updates: " << result.fusions << '\n';
  if (result.failure_reason) {
    std::cout << "failure_reason: " << to_string(*result.failure_reason) << '\n';
    std::cerr << "navigation failed: " << result.failure_detail << '\n';
    return kExitNavigation;
  }
  return kExitOk;
}

int cmd_filter(FilterArgs args) {
  if (!args.scenario.empty()) {
    const auto scenario = load_scenario(args.scenario);
    args.params.max_time = scenario.sensor.max_echo_time();
    args.params.ping_period = scenario.sensor.ping_period;
  }
  std::ifstream in(args.in);
  if (!in) throw IoError("cannot open echo stream '" + args.in + "'");
  const auto echoes = read_echo_stream(in);
  const auto classes = classify_stream(echoes, args.params);
  std::string text;
  for (const auto c : classes) {
    text += to_string(c);
    text += '\n';
  }
  write_text(args.out, text);
  return kExitOk;
}

int cmd_mapconv(const MapconvArgs& args) {
  save_map(load_map(args.in), args.out);
  return kExitOk;
}

int cmd_validate(const std::string& path) {
  std::cout << to_yaml(load_scenario(path));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultrasonic navigation simulator"};
  app.require_subcommand(1);

  const char* env_out = std::getenv("SONARNAV_OUT_DIR");
  RunArgs run_args;
  run_args.out_dir = env_out && *env_out ? env_out : "out";
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write maps plus trajectory.csv");
  run_cmd->add_option("--scenario", run_args.scenario, "Scenario file (YAML)")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario seed");
  run_cmd->add_option("--out", run_args.out_dir, "Output directory (default: $SONARNAV_OUT_DIR or ./out)");
  run_cmd->add_option("--map-format", run_args.map_format, "csv, pgm or both")
      ->check(CLI::IsMember({"csv", "pgm", "both"}));

  FilterArgs filter_args;
  auto* filter_cmd = app.add_subcommand("filter", "Classify an echo stream as approaching/leaving");
  filter_cmd->add_option("--in", filter_args.in, "Echo stream: one line per ping, seconds or '-'")->required();
  filter_cmd->add_option("--out", filter_args.out, "Classification output, one per line")->required();
  filter_cmd->add_option("--scenario", filter_args.scenario, "Take max_time from this scenario's sensor");
  filter_cmd->add_option("--g", filter_args.params.g, "Filter coefficient in (0, 1)");
  filter_cmd->add_option("--hysteresis", filter_args.params.dt_hysteresis, "Hysteresis band (s)");
  filter_cmd->add_option("--max-time", filter_args.params.max_time, "No-echo sentinel (s)");
  filter_cmd->add_option("--miss-reset", filter_args.params.miss_reset_count, "Misses before reset");

  MapconvArgs mapconv_args;
  auto* mapconv_cmd = app.add_subcommand("mapconv", "Convert an occupancy map between .csv and .pgm");
  mapconv_cmd->add_option("--in", mapconv_args.in, "Input map")->required();
  mapconv_cmd->add_option("--out", mapconv_args.out, "Output map (.csv or .pgm)")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario and print its normalised form");
  validate_cmd->add_option("--scenario", validate_path, "Scenario file (YAML)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*filter_cmd) return cmd_filter(filter_args);
    if (*mapconv_cmd) return cmd_mapconv(mapconv_args);
    if (*validate_cmd) return cmd_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return kExitInput;
  }
  return kExitInput;
}
