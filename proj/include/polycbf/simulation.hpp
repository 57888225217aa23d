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

#ifndef POLYCBF__SIMULATION_HPP_
#define POLYCBF__SIMULATION_HPP_

#include "polycbf/cbf_constraints.hpp"
#include "polycbf/geometry.hpp"
#include "polycbf/safety_filter.hpp"
#include "polycbf/vehicle_model.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace polycbf
{

using Path = std::vector<Vec2>;

struct SpawnRules
{
  std::uint64_t seed = 0;
  double speed_min = 0.0;
  double speed_max = 0.5;
  /// Every barrier value must be at least this large at a spawn state.
  double h_margin = 0.01;
};

/// Road bounded by a left and a right polyline, with reference paths inside it.
struct Scenario
{
  PolylineBoundary left;
  PolylineBoundary right;
  std::vector<Path> reference_paths;
  SpawnRules spawn;
  int duration_steps = 600;
};

enum class PlannerKind { kPurePursuit, kAdversarial };

std::string_view to_string(PlannerKind kind);

struct PlannerConfig
{
  PlannerKind kind = PlannerKind::kPurePursuit;
  double lookahead = 0.25;     // m
  double speed_ref = 0.5;      // m/s
  double speed_gain = 2.0;     // 1/s
  double steer_gain = 8.0;     // 1/s, steering angle tracking
  double max_steering = 0.6;   // rad, commanded steering angle limit
  double steer_noise = 0.0;    // rad/s, std-dev of noise added to the steering rate
  double heading_gain = 2.0;   // adversarial: steering angle per rad of heading error
  BoundarySide target = BoundarySide::kLeft;  // adversarial target boundary
};

/// Tracks `path` with pure pursuit; output clamped to the filter bounds.
ControlAction pure_pursuit_planner(
  const VehicleState & state, const Path & path, const VehicleParams & vehicle,
  const PlannerConfig & config, const FilterParams & bounds);

/// Steers toward the nearest point of `target` while holding speed_ref.
ControlAction adversarial_planner(
  const VehicleState & state, const PolylineBoundary & target, const PlannerConfig & config,
  const FilterParams & bounds);

/// One RK4 step under zero-order-hold input. Steering saturates at
/// +-kMaxSteering (the step is split at the saturation instant) and the
/// heading is wrapped.
VehicleState step(
  const VehicleState & state, const ControlAction & u, double dt, const VehicleParams & params);

/// Footprint rectangle corners (counter-clockwise, starting rear-right).
std::vector<Vec2> footprint(const VehicleState & state, const VehicleParams & params);

/// True when the oriented length x width rectangle touches either boundary polyline.
bool collision_check(
  const VehicleState & state, const VehicleParams & params, const PolylineBoundary & left,
  const PolylineBoundary & right);

/// Segment vs. closed axis-aligned box [-hx, hx] x [-hy, hy].
bool segment_intersects_box(const Vec2 & a, const Vec2 & b, double hx, double hy);

struct StepRecord
{
  int step = 0;
  VehicleState state;       // state the filter was evaluated at
  ControlAction u_nom;
  FilterOutcome outcome;
  double min_h = 0.0;       // smallest barrier value after applying the action
  bool collided = false;    // ground-truth rectangle test after applying the action
  bool reset = false;       // vehicle was respawned after this step
};

struct Percentiles
{
  double p50 = 0.0;
  double p95 = 0.0;
  double max = 0.0;
};

Percentiles percentiles(std::vector<double> samples);

struct RunSummary
{
  int steps = 0;
  int collisions = 0;
  int resets = 0;
  int active_steps = 0;
  int infeasible_steps = 0;
  double activity_rate = 0.0;
  double min_h = 0.0;
  Percentiles distance_time;
  Percentiles solve_time;
  Percentiles total_time;
};

struct RunOptions
{
  bool filter_on = true;
  std::uint64_t seed = 0;
};

struct RunResult
{
  std::vector<StepRecord> records;
  RunSummary summary;
};

struct Spawn
{
  VehicleState state;
  std::size_t path_index = 0;
};

/// Samples a spawn state on a random reference path. Throws ConfigError when
/// no sampled state clears the barrier margin.
Spawn sample_spawn(const Scenario & scenario, const VehicleParams & vehicle, std::mt19937_64 & rng);

/// Closed-loop rollout; deterministic in (scenario, options.seed).
RunResult run_scenario(
  const Scenario & scenario, const VehicleParams & vehicle, const FilterParams & filter,
  const PlannerConfig & planner, const RunOptions & options);

RunSummary summarize(const std::vector<StepRecord> & records);

struct BenchmarkRow
{
  int n_circles = 0;
  double median_distance_time = 0.0;  // s
  double median_solve_time = 0.0;     // s
  double median_total_time = 0.0;     // s
};

/// Times row construction and the QP over the states of a closed-loop run,
/// for n_circles in [1, max_circles]. Each state is timed `repeats` times.
std::vector<BenchmarkRow> run_benchmark(
  const Scenario & scenario, const VehicleParams & vehicle, const FilterParams & filter,
  const PlannerConfig & planner, std::uint64_t seed, int max_circles = 5, int repeats = 10);

double pearson_correlation(const std::vector<double> & x, const std::vector<double> & y);

}  // namespace polycbf

#endif  // POLYCBF__SIMULATION_HPP_
