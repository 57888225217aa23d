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

#include "polycbf/safety_filter.hpp"

#include "polycbf/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

namespace polycbf
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool deviates(const ControlAction & a, const ControlAction & b)
{
  return std::max(std::abs(a.accel - b.accel), std::abs(a.steer_rate - b.steer_rate)) >
         kActivityThreshold;
}

}  // namespace

ControlAction fallback_action(const FilterParams & filter)
{
  return {
    filter.u_min.accel, std::clamp(0.0, filter.u_min.steer_rate, filter.u_max.steer_rate)};
}

FilterParams state_bounds(const VehicleState & state, const FilterParams & filter)
{
  // Keep the steering angle inside its mechanical range over the step and
  // stop braking at standstill instead of reversing.
  FilterParams out = filter;
  const double dt = filter.dt;
  out.u_min.steer_rate =
    std::max(filter.u_min.steer_rate, (-kMaxSteering - state.steering) / dt);
  out.u_max.steer_rate = std::min(filter.u_max.steer_rate, (kMaxSteering - state.steering) / dt);
  if (state.speed >= 0.0) {
    out.u_min.accel = std::max(filter.u_min.accel, -state.speed / dt);
  }
  out.u_min.steer_rate = std::min(out.u_min.steer_rate, out.u_max.steer_rate);
  out.u_min.accel = std::min(out.u_min.accel, out.u_max.accel);
  return out;
}

FilterOutcome certify_rows(
  const ControlAction & u_nom, const FilterParams & filter, std::vector<CbfConstraintRow> rows)
{
  FilterOutcome out;
  const auto start = Clock::now();
  out.qp = solve_qp(make_qp(u_nom, filter, rows));
  out.solve_time = seconds_since(start);
  out.rows = std::move(rows);

  if (out.qp.status == QpStatus::kInfeasible) {
    out.infeasible = true;
    out.u_certified = fallback_action(filter);
  } else {
    out.u_certified = out.qp.u;
  }
  out.was_active = deviates(out.u_certified, u_nom);
  return out;
}

FilterOutcome certify(
  const VehicleState & state, const ControlAction & u_nom, const VehicleParams & params,
  const FilterParams & filter, const PolylineBoundary & left, const PolylineBoundary & right)
{
  const FilterParams bounded = state_bounds(state, filter);
  const auto start = Clock::now();
  std::vector<CbfConstraintRow> rows;
  try {
    rows = build_all_rows(state, params, bounded, left, right);
  } catch (const NonFiniteField &) {
    // No trustworthy constraint set: brake.
    FilterOutcome out;
    out.distance_time = seconds_since(start);
    out.infeasible = true;
    out.u_certified = fallback_action(bounded);
    out.was_active = deviates(out.u_certified, u_nom);
    return out;
  }
  const double distance_time = seconds_since(start);
  FilterOutcome out = certify_rows(u_nom, bounded, std::move(rows));
  out.distance_time = distance_time;
  return out;
}

SafetyFilter::SafetyFilter(VehicleParams params, FilterParams filter)
: params_(std::move(params)), filter_(std::move(filter))
{
  params_.validate();
  filter_.validate();
}

FilterOutcome SafetyFilter::certify(
  const VehicleState & state, const ControlAction & u_nom, const PolylineBoundary & left,
  const PolylineBoundary & right) const
{
  return polycbf::certify(state, u_nom, params_, filter_, left, right);
}

}  // namespace polycbf
