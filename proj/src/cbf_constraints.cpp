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

#include "polycbf/cbf_constraints.hpp"

#include "polycbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace polycbf
{

std::string_view to_string(BoundarySide side)
{
  return side == BoundarySide::kLeft ? "left" : "right";
}

void FilterParams::validate() const
{
  if (!(dt > 0.0)) {
    throw ConfigError("dt must be positive");
  }
  if (!(alpha1 > 0.0)) {
    throw ConfigError("alpha1 must be positive");
  }
  if (!std::isfinite(gamma_term)) {
    throw ConfigError("gamma_term must be finite");
  }
  if (!(weights.x() > 0.0) || !(weights.y() > 0.0)) {
    throw ConfigError("QP weights must be positive");
  }
  if (!(u_min.accel < u_max.accel) || !(u_min.steer_rate < u_max.steer_rate)) {
    throw ConfigError("control bounds must satisfy u_min < u_max");
  }
  if (!(steps.gradient > 0.0) || !(steps.hessian > 0.0)) {
    throw ConfigError("finite-difference steps must be positive");
  }
}

BarrierValue evaluate_barrier(
  const CircleKinematics & kin, double radius, const PolylineBoundary & boundary,
  const DifferentiationSteps & steps)
{
  const DistanceEvaluation d = polyline_pseudo_distance(kin.center, boundary, steps);
  return {d.value - radius, d.gradient, d.hessian};
}

CbfConstraintRow build_row(
  const VehicleState & state, const VehicleParams & params, const FilterParams & filter,
  int circle_index, const PolylineBoundary & boundary, BoundarySide side)
{
  const CircleKinematics kin = circle_kinematics(state, params, circle_index);
  const BarrierValue bv = evaluate_barrier(kin, params.circle_radius(), boundary, filter.steps);
  if (!std::isfinite(bv.h) || !bv.gradient.allFinite() || !bv.hessian.allFinite()) {
    throw NonFiniteField(
      "non-finite distance field at circle " + std::to_string(circle_index) + " (" +
      std::string(to_string(side)) + " boundary)");
  }

  const double dt = filter.dt;
  const double half_dt2 = 0.5 * dt * dt;
  const double h_dot = bv.gradient.dot(kin.velocity);
  // h'' = grad . (accel_const + accel_input u) + v^T H v
  const double h_ddot_const =
    bv.gradient.dot(kin.accel_const) + kin.velocity.dot(bv.hessian * kin.velocity);

  CbfConstraintRow row;
  row.a = half_dt2 * (kin.accel_input.transpose() * bv.gradient);
  row.b = filter.gamma_term - dt * h_dot - half_dt2 * h_ddot_const - filter.alpha1 * bv.h;
  row.h = bv.h;
  row.h_dot = h_dot;
  row.circle_index = circle_index;
  row.side = side;
  return row;
}

std::vector<CbfConstraintRow> build_all_rows(
  const VehicleState & state, const VehicleParams & params, const FilterParams & filter,
  const PolylineBoundary & left, const PolylineBoundary & right)
{
  std::vector<CbfConstraintRow> rows;
  rows.reserve(2 * params.n_circles);
  for (int j = 0; j < params.n_circles; ++j) {
    rows.push_back(build_row(state, params, filter, j, left, BoundarySide::kLeft));
    rows.push_back(build_row(state, params, filter, j, right, BoundarySide::kRight));
  }
  return rows;
}

double min_barrier(
  const VehicleState & state, const VehicleParams & params, const PolylineBoundary & left,
  const PolylineBoundary & right)
{
  const double radius = params.circle_radius();
  double h_min = std::numeric_limits<double>::infinity();
  for (const Vec2 & offset : circle_layout(params)) {
    const double c = std::cos(state.heading);
    const double s = std::sin(state.heading);
    const Vec2 center(state.x + c * offset.x(), state.y + s * offset.x());
    h_min = std::min(
      {h_min, signed_pseudo_distance(center, left).value - radius,
       signed_pseudo_distance(center, right).value - radius});
  }
  return h_min;
}

}  // namespace polycbf
