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

#include "polycbf/simulation.hpp"

#include "polycbf/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace polycbf
{

namespace
{

using Clock = std::chrono::steady_clock;

StateVector to_vector(const VehicleState & s)
{
  StateVector v;
  v << s.x, s.y, s.heading, s.speed, s.steering;
  return v;
}

VehicleState from_vector(const StateVector & v)
{
  return {v[0], v[1], v[2], v[3], v[4]};
}

VehicleState rk4(
  const VehicleState & state, const ControlAction & u, double dt, const VehicleParams & params)
{
  const StateVector x0 = to_vector(state);
  const StateVector k1 = dynamics(state, u, params);
  const StateVector k2 = dynamics(from_vector(x0 + 0.5 * dt * k1), u, params);
  const StateVector k3 = dynamics(from_vector(x0 + 0.5 * dt * k2), u, params);
  const StateVector k4 = dynamics(from_vector(x0 + dt * k3), u, params);
  return from_vector(x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

ControlAction clamp_action(const ControlAction & u, const FilterParams & bounds)
{
  return {
    std::clamp(u.accel, bounds.u_min.accel, bounds.u_max.accel),
    std::clamp(u.steer_rate, bounds.u_min.steer_rate, bounds.u_max.steer_rate)};
}

Vec2 to_body(const VehicleState & s, const Vec2 & p)
{
  const double c = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  const Vec2 d = p - s.position();
  return {c * d.x() + sn * d.y(), -sn * d.x() + c * d.y()};
}

bool touches(
  const VehicleState & state, const VehicleParams & params, const PolylineBoundary & boundary)
{
  const double hx = 0.5 * params.length;
  const double hy = 0.5 * params.width;
  const double reach = std::hypot(hx, hy);
  const Vec2 c = state.position();
  const auto & pts = boundary.points();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Vec2 & a = pts[k];
    const Vec2 & b = pts[k + 1];
    if (
      std::min(a.x(), b.x()) > c.x() + reach || std::max(a.x(), b.x()) < c.x() - reach ||
      std::min(a.y(), b.y()) > c.y() + reach || std::max(a.y(), b.y()) < c.y() - reach) {
      continue;
    }
    if (segment_intersects_box(to_body(state, a), to_body(state, b), hx, hy)) {
      return true;
    }
  }
  return false;
}

double median(std::vector<double> v)
{
  return percentiles(std::move(v)).p50;
}

double quantile_sorted(const std::vector<double> & sorted, double q)
{
  if (sorted.empty()) {
    return 0.0;
  }
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view to_string(PlannerKind kind)
{
  return kind == PlannerKind::kPurePursuit ? "pure_pursuit" : "adversarial";
}

ControlAction pure_pursuit_planner(
  const VehicleState & state, const Path & path, const VehicleParams & vehicle,
  const PlannerConfig & config, const FilterParams & bounds)
{
  if (path.size() < 2) {
    throw std::invalid_argument("pure pursuit needs a path with at least two points");
  }
  const PolylineProjection proj = project_onto_polyline(state.position(), path);
  const double length = polyline_length(path);
  const double s_target = proj.arc_length + config.lookahead;
  Vec2 target;
  if (s_target <= length) {
    target = point_at_arc_length(path, s_target);
  } else {
    const Vec2 dir = (path.back() - path[path.size() - 2]).normalized();
    target = path.back() + (s_target - length) * dir;
  }

  const Vec2 local = to_body(state, target);
  const double alpha = std::atan2(local.y(), local.x());
  const double dist = std::max(local.norm(), 1e-6);
  double steering_des = std::atan2(2.0 * vehicle.wheelbase * std::sin(alpha), dist);
  steering_des = std::clamp(steering_des, -config.max_steering, config.max_steering);

  const ControlAction u{
    config.speed_gain * (config.speed_ref - state.speed),
    config.steer_gain * (steering_des - state.steering)};
  return clamp_action(u, bounds);
}

ControlAction adversarial_planner(
  const VehicleState & state, const PolylineBoundary & target, const PlannerConfig & config,
  const FilterParams & bounds)
{
  const PolylineProjection proj = project_onto_polyline(state.position(), target.points());
  const Vec2 to_target = proj.point - state.position();
  double steering_des = 0.0;
  if (to_target.norm() > 0.0) {
    const double heading_error =
      wrap_angle(std::atan2(to_target.y(), to_target.x()) - state.heading);
    steering_des = std::clamp(
      config.heading_gain * heading_error, -config.max_steering, config.max_steering);
  }
  const ControlAction u{
    config.speed_gain * (config.speed_ref - state.speed),
    config.steer_gain * (steering_des - state.steering)};
  return clamp_action(u, bounds);
}

VehicleState step(
  const VehicleState & state, const ControlAction & u, double dt, const VehicleParams & params)
{
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integration step must be positive");
  }
  VehicleState s = state;
  s.steering = std::clamp(s.steering, -kMaxSteering, kMaxSteering);

  // Steering evolves linearly, so the saturation instant is exact.
  double t_free = dt;
  if (u.steer_rate > 0.0 && s.steering + u.steer_rate * dt > kMaxSteering) {
    t_free = (kMaxSteering - s.steering) / u.steer_rate;
  } else if (u.steer_rate < 0.0 && s.steering + u.steer_rate * dt < -kMaxSteering) {
    t_free = (-kMaxSteering - s.steering) / u.steer_rate;
  }

  if (t_free > 0.0) {
    s = rk4(s, u, t_free, params);
  }
  if (t_free < dt) {
    s.steering = u.steer_rate > 0.0 ? kMaxSteering : -kMaxSteering;
    s = rk4(s, ControlAction{u.accel, 0.0}, dt - t_free, params);
  }
  s.steering = std::clamp(s.steering, -kMaxSteering, kMaxSteering);
  s.heading = wrap_angle(s.heading);
  return s;
}

std::vector<Vec2> footprint(const VehicleState & state, const VehicleParams & params)
{
  const double hx = 0.5 * params.length;
  const double hy = 0.5 * params.width;
  const double c = std::cos(state.heading);
  const double s = std::sin(state.heading);
  std::vector<Vec2> corners;
  for (const Vec2 & local : {Vec2(-hx, -hy), Vec2(hx, -hy), Vec2(hx, hy), Vec2(-hx, hy)}) {
    corners.emplace_back(
      state.x + c * local.x() - s * local.y(), state.y + s * local.x() + c * local.y());
  }
  return corners;
}

bool segment_intersects_box(const Vec2 & a, const Vec2 & b, double hx, double hy)
{
  // Liang-Barsky clipping against the closed box.
  const Vec2 d = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() + hx, hx - a.x(), a.y() + hy, hy - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) {
        return false;
      }
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) {
      return false;
    }
  }
  return true;
}

bool collision_check(
  const VehicleState & state, const VehicleParams & params, const PolylineBoundary & left,
  const PolylineBoundary & right)
{
  return touches(state, params, left) || touches(state, params, right);
}

Percentiles percentiles(std::vector<double> samples)
{
  if (samples.empty()) {
    return {};
  }
  std::sort(samples.begin(), samples.end());
  return {quantile_sorted(samples, 0.5), quantile_sorted(samples, 0.95), samples.back()};
}

Spawn sample_spawn(const Scenario & scenario, const VehicleParams & vehicle, std::mt19937_64 & rng)
{
  constexpr int kAttempts = 200;
  if (scenario.reference_paths.empty()) {
    throw ConfigError("scenario has no reference paths to spawn on");
  }
  std::uniform_int_distribution<std::size_t> pick_path(0, scenario.reference_paths.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::size_t idx = pick_path(rng);
    const Path & path = scenario.reference_paths[idx];
    const double length = polyline_length(path);
    // Leave room ahead so a fresh spawn does not immediately complete the path.
    const double s = unit(rng) * std::max(0.0, length - 0.5);
    const Vec2 p = point_at_arc_length(path, s);
    const Vec2 dir = direction_at_arc_length(path, s);
    VehicleState st;
    st.x = p.x();
    st.y = p.y();
    st.heading = std::atan2(dir.y(), dir.x());
    st.speed = scenario.spawn.speed_min + unit(rng) * (scenario.spawn.speed_max - scenario.spawn.speed_min);
    st.steering = 0.0;
    if (
      min_barrier(st, vehicle, scenario.left, scenario.right) >= scenario.spawn.h_margin &&
      !collision_check(st, vehicle, scenario.left, scenario.right)) {
      return {st, idx};
    }
  }
  throw ConfigError(
    "no spawn state with all barrier values >= " + std::to_string(scenario.spawn.h_margin) +
    " m after " + std::to_string(kAttempts) + " attempts");
}

RunSummary summarize(const std::vector<StepRecord> & records)
{
  RunSummary sum;
  sum.steps = static_cast<int>(records.size());
  sum.min_h = std::numeric_limits<double>::infinity();
  std::vector<double> dist_t, solve_t, total_t;
  dist_t.reserve(records.size());
  solve_t.reserve(records.size());
  total_t.reserve(records.size());
  for (const auto & r : records) {
    sum.collisions += r.collided ? 1 : 0;
    sum.resets += r.reset ? 1 : 0;
    sum.active_steps += r.outcome.was_active ? 1 : 0;
    sum.infeasible_steps += r.outcome.infeasible ? 1 : 0;
    sum.min_h = std::min(sum.min_h, r.min_h);
    dist_t.push_back(r.outcome.distance_time);
    solve_t.push_back(r.outcome.solve_time);
    total_t.push_back(r.outcome.distance_time + r.outcome.solve_time);
  }
  if (records.empty()) {
    sum.min_h = 0.0;
  } else {
    sum.activity_rate = static_cast<double>(sum.active_steps) / static_cast<double>(sum.steps);
  }
  sum.distance_time = percentiles(std::move(dist_t));
  sum.solve_time = percentiles(std::move(solve_t));
  sum.total_time = percentiles(std::move(total_t));
  return sum;
}

RunResult run_scenario(
  const Scenario & scenario, const VehicleParams & vehicle, const FilterParams & filter,
  const PlannerConfig & planner, const RunOptions & options)
{
  vehicle.validate();
  filter.validate();
  RunResult result;
  if (scenario.duration_steps <= 0) {
    result.summary = summarize(result.records);
    return result;
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Spawn spawn = sample_spawn(scenario, vehicle, rng);
  VehicleState state = spawn.state;
  const PolylineBoundary & adversary_target =
    planner.target == BoundarySide::kLeft ? scenario.left : scenario.right;

  result.records.reserve(scenario.duration_steps);
  for (int k = 0; k < scenario.duration_steps; ++k) {
    const Path & path = scenario.reference_paths[spawn.path_index];
    ControlAction u_nom =
      planner.kind == PlannerKind::kPurePursuit
        ? pure_pursuit_planner(state, path, vehicle, planner, filter)
        : adversarial_planner(state, adversary_target, planner, filter);
    if (planner.steer_noise > 0.0) {
      u_nom.steer_rate += planner.steer_noise * noise(rng);
      u_nom = clamp_action(u_nom, filter);
    }

    StepRecord rec;
    rec.step = k;
    rec.state = state;
    rec.u_nom = u_nom;
    if (options.filter_on) {
      rec.outcome = certify(state, u_nom, vehicle, filter, scenario.left, scenario.right);
    } else {
      rec.outcome.u_certified = u_nom;
    }

    const VehicleState next = step(state, rec.outcome.u_certified, filter.dt, vehicle);
    rec.min_h = min_barrier(next, vehicle, scenario.left, scenario.right);
    rec.collided = collision_check(next, vehicle, scenario.left, scenario.right);

    const double progress = project_onto_polyline(next.position(), path).arc_length;
    const bool completed = progress >= polyline_length(path) - planner.lookahead;
    rec.reset = rec.collided || completed;
    result.records.push_back(std::move(rec));

    if (result.records.back().reset) {
      spawn = sample_spawn(scenario, vehicle, rng);
      state = spawn.state;
    } else {
      state = next;
    }
  }
  result.summary = summarize(result.records);
  return result;
}

std::vector<BenchmarkRow> run_benchmark(
  const Scenario & scenario, const VehicleParams & vehicle, const FilterParams & filter,
  const PlannerConfig & planner, std::uint64_t seed, int max_circles, int repeats)
{
  if (max_circles < 1 || repeats < 1) {
    throw std::invalid_argument("benchmark needs max_circles >= 1 and repeats >= 1");
  }
  // One closed-loop rollout supplies the states; every circle count is timed on the same states.
  const RunResult rollout = run_scenario(scenario, vehicle, filter, planner, {true, seed});

  // Circle counts are interleaved per state so that drift in machine load
  // affects every count alike.
  const auto counts = static_cast<std::size_t>(max_circles);
  std::vector<std::vector<double>> dist_t(counts), solve_t(counts), total_t(counts);
  for (const auto & rec : rollout.records) {
    for (int n = 1; n <= max_circles; ++n) {
      VehicleParams v = vehicle;
      v.n_circles = n;
      std::vector<CbfConstraintRow> rows;
      const auto t0 = Clock::now();
      for (int r = 0; r < repeats; ++r) {
        rows = build_all_rows(rec.state, v, filter, scenario.left, scenario.right);
      }
      const auto t1 = Clock::now();
      const QpProblem qp = make_qp(rec.u_nom, state_bounds(rec.state, filter), rows);
      QpSolution sol;
      for (int r = 0; r < repeats; ++r) {
        sol = solve_qp(qp);
      }
      const auto t2 = Clock::now();
      const double d = std::chrono::duration<double>(t1 - t0).count() / repeats;
      const double s = std::chrono::duration<double>(t2 - t1).count() / repeats;
      const auto k = static_cast<std::size_t>(n - 1);
      dist_t[k].push_back(d);
      solve_t[k].push_back(s);
      total_t[k].push_back(d + s);
    }
  }
  std::vector<BenchmarkRow> table;
  for (int n = 1; n <= max_circles; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    table.push_back({n, median(dist_t[k]), median(solve_t[k]), median(total_t[k])});
  }
  return table;
}

double pearson_correlation(const std::vector<double> & x, const std::vector<double> & y)
{
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson correlation needs two equally sized samples");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace polycbf
