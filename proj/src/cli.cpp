// Copyright 2026 The polycbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polycbf/cli.hpp"

#include "polycbf/errors.hpp"
#include "polycbf/map_generator.hpp"
#include "polycbf/scenario_io.hpp"
#include "polycbf/simulation.hpp"
#include "polycbf/trace.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace polycbf
{

namespace
{

constexpr int kExitCollision = 1;
constexpr int kExitInput = 3;

struct SourceOptions
{
  std::string scenario_path;
  std::string map_kind;
  std::uint64_t map_seed = 0;
  double curvature = MapParams{}.curvature;
  double spacing = MapParams{}.spacing;
};

void add_source_options(CLI::App * cmd, SourceOptions & src)
{
  auto * file = cmd->add_option("--scenario", src.scenario_path, "Scenario file (JSON)");
  auto * map = cmd->add_option("--map", src.map_kind, "Generate a map: loop, interchange, intersection, scurve");
  file->excludes(map);
  cmd->add_option("--map-seed", src.map_seed, "Seed for --map generation");
  cmd->add_option("--curvature", src.curvature, "Peak curvature for --map scurve [1/m]");
  cmd->add_option("--spacing", src.spacing, "Boundary point spacing for --map [m]")
    ->check(CLI::PositiveNumber);
}

ScenarioFile resolve_source(const SourceOptions & src)
{
  if (!src.scenario_path.empty()) {
    return load_scenario(src.scenario_path);
  }
  if (!src.map_kind.empty()) {
    MapParams mp;
    mp.curvature = src.curvature;
    mp.spacing = src.spacing;
    return generate_map(parse_map_kind(src.map_kind), src.map_seed, mp);
  }
  throw ConfigError("one of --scenario or --map is required");
}

std::string join(const std::vector<std::string> & args)
{
  std::ostringstream s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    s << (i ? " " : "") << args[i];
  }
  return s.str();
}

}  // namespace

int run_command(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Polyline road-boundary CBF safety filter"};
  app.require_subcommand(1);

  // run
  SourceOptions run_src;
  std::string planner_kind;
  std::string filter_mode = "on";
  std::optional<std::uint64_t> run_seed;
  std::optional<int> steps;
  std::optional<int> n_circles;
  std::optional<double> steer_noise;
  std::string target;
  std::string out_dir = "run_out";
  bool allow_collisions = false;
  auto * run = app.add_subcommand("run", "Closed-loop simulation with trace output");
  add_source_options(run, run_src);
  run->add_option("--planner", planner_kind, "pure_pursuit or adversarial")
    ->check(CLI::IsMember({"pure_pursuit", "adversarial"}));
  run->add_option("--filter", filter_mode, "Safety filter on/off")->check(CLI::IsMember({"on", "off"}));
  run->add_option("--seed", run_seed, "Spawn/noise seed (default: scenario spawn.seed)");
  run->add_option("--steps", steps, "Number of steps (default: scenario duration_steps)")
    ->check(CLI::NonNegativeNumber);
  run->add_option("--n-circles", n_circles, "Override the number of circles")->check(CLI::PositiveNumber);
  run->add_option("--steer-noise", steer_noise, "Std-dev of steering-rate noise [rad/s]")
    ->check(CLI::NonNegativeNumber);
  run->add_option("--target", target, "Adversarial target boundary")->check(CLI::IsMember({"left", "right"}));
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--allow-collisions", allow_collisions, "Exit 0 even if the filtered run collides");

  // bench
  SourceOptions bench_src;
  int bench_steps = 600;
  int repeats = 10;
  int max_circles = 5;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  auto * bench = app.add_subcommand("bench", "Time distance evaluation and QP for 1..5 circles");
  add_source_options(bench, bench_src);
  bench->add_option("--steps", bench_steps, "Rollout length supplying timed states")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", repeats, "Timing repetitions per state")->check(CLI::PositiveNumber);
  bench->add_option("--max-circles", max_circles, "Largest circle count")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Rollout seed");
  bench->add_option("--out", bench_out, "Write the table as tab-separated text");

  // validate
  std::string validate_path;
  auto * validate = app.add_subcommand("validate", "Check a scenario file against the schema");
  validate->add_option("file", validate_path, "Scenario file")->required();

  // gen
  std::string gen_kind;
  std::uint64_t gen_seed = 0;
  MapParams gen_params;
  std::string gen_out;
  auto * gen = app.add_subcommand("gen", "Generate a procedural map as a scenario file");
  gen->add_option("--kind", gen_kind, "loop, interchange, intersection, scurve")
    ->required()
    ->check(CLI::IsMember({"loop", "interchange", "intersection", "scurve"}));
  gen->add_option("--seed", gen_seed, "Shape seed");
  gen->add_option("--curvature", gen_params.curvature, "Peak curvature for scurve [1/m]");
  gen->add_option("--lane-width", gen_params.lane_width, "Lane width [m]")->check(CLI::PositiveNumber);
  gen->add_option("--spacing", gen_params.spacing, "Boundary point spacing [m]")->check(CLI::PositiveNumber);
  gen->add_option("--gamma-term", gen_params.gamma_term, "Filter gamma*dt^3 written to the file [m]");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    return app.exit(e, out, err);
  }

  try {
    if (run->parsed()) {
      ScenarioFile file = resolve_source(run_src);
      if (!planner_kind.empty()) {
        file.planner.kind =
          planner_kind == "adversarial" ? PlannerKind::kAdversarial : PlannerKind::kPurePursuit;
      }
      if (n_circles) {
        file.vehicle.n_circles = *n_circles;
      }
      if (steer_noise) {
        file.planner.steer_noise = *steer_noise;
      }
      if (!target.empty()) {
        file.planner.target = target == "left" ? BoundarySide::kLeft : BoundarySide::kRight;
      }
      if (steps) {
        file.scenario.duration_steps = *steps;
      }
      if (run_seed) {
        file.scenario.spawn.seed = *run_seed;
      }
      validate_scenario(file);

      const bool filter_on = filter_mode == "on";
      const RunResult result = run_scenario(
        file.scenario, file.vehicle, file.filter, file.planner, {filter_on, file.scenario.spawn.seed});

      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      std::ofstream trace(dir / "trace.jsonl");
      write_trace(trace, result.records);

      nlohmann::ordered_json summary;
      summary["command"] = "run " + join(args);
      summary["seed"] = file.scenario.spawn.seed;
      summary["filter_on"] = filter_on;
      summary["summary"] = summary_json(result.summary);
      summary["config"] = to_json(file);
      std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';

      const RunSummary & s = result.summary;
      out << "steps=" << s.steps << " collisions=" << s.collisions << " resets=" << s.resets
          << " activity_rate=" << s.activity_rate << " infeasible=" << s.infeasible_steps
          << " min_h=" << s.min_h << " p50_total_ms=" << 1e3 * s.total_time.p50 << '\n';
      if (filter_on && s.collisions > 0 && !allow_collisions) {
        err << "error: " << s.collisions << " collision(s) with the safety filter on\n";
        return kExitCollision;
      }
      return 0;
    }

    if (bench->parsed()) {
      ScenarioFile file = resolve_source(bench_src);
      file.scenario.duration_steps = bench_steps;
      const auto table = run_benchmark(
        file.scenario, file.vehicle, file.filter, file.planner, bench_seed, max_circles, repeats);
      std::ostringstream tsv;
      tsv << "n_circles\tdistance_ms\tqp_ms\ttotal_ms\n";
      tsv << std::fixed << std::setprecision(6);
      for (const auto & row : table) {
        tsv << row.n_circles << '\t' << 1e3 * row.median_distance_time << '\t'
            << 1e3 * row.median_solve_time << '\t' << 1e3 * row.median_total_time << '\n';
      }
      out << tsv.str();
      if (!bench_out.empty()) {
        std::ofstream(bench_out) << tsv.str();
      }
      for (const auto & row : table) {
        if (row.n_circles == 3 && row.median_total_time > 0.025) {
          err << "warning: median total time for 3 circles exceeds 25 ms\n";
        }
      }
      return 0;
    }

    if (validate->parsed()) {
      const ScenarioFile file = load_scenario(validate_path);
      out << "ok: " << (file.name.empty() ? validate_path : file.name) << " ("
          << file.scenario.left.points().size() << " left / " << file.scenario.right.points().size()
          << " right boundary points, " << file.scenario.reference_paths.size()
          << " reference paths)\n";
      return 0;
    }

    if (gen->parsed()) {
      const ScenarioFile file = generate_map(parse_map_kind(gen_kind), gen_seed, gen_params);
      if (gen_out.empty()) {
        out << to_json(file).dump(2) << '\n';
      } else {
        save_scenario(gen_out, file);
      }
      return 0;
    }
  } catch (const Error & e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}

}  // namespace polycbf
