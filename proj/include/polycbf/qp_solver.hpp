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

#ifndef POLYCBF__QP_SOLVER_HPP_
#define POLYCBF__QP_SOLVER_HPP_

#include "polycbf/cbf_constraints.hpp"
#include "polycbf/geometry.hpp"
#include "polycbf/vehicle_model.hpp"

#include <vector>

namespace polycbf
{

/// a . u >= b
struct LinearConstraint
{
  Vec2 a = Vec2::Zero();
  double b = 0.0;
};

/// min (u - nominal)^T diag(weights) (u - nominal)
/// s.t. rows[m].a . u >= rows[m].b, lower <= u <= upper.
struct QpProblem
{
  ControlAction nominal;
  Vec2 weights{1.0, 1.0};
  std::vector<LinearConstraint> rows;
  ControlAction lower{-40.0, -40.0};
  ControlAction upper{40.0, 40.0};
};

enum class QpStatus { kOptimal, kInfeasible };

struct QpSolution
{
  ControlAction u;
  QpStatus status = QpStatus::kInfeasible;
  /// Indices into the stacked constraint list: rows first, then the bound
  /// faces accel >= lower, accel <= upper, steer_rate >= lower, steer_rate <= upper.
  std::vector<int> active_set;
  /// One multiplier per stacked constraint (zero when inactive).
  std::vector<double> multipliers;
  double objective = 0.0;
  double kkt_residual = 0.0;
};

QpProblem make_qp(
  const ControlAction & nominal, const FilterParams & filter,
  const std::vector<CbfConstraintRow> & rows);

/// Stacked constraint list (rows followed by the four bound faces).
std::vector<LinearConstraint> stacked_constraints(const QpProblem & problem);

double qp_objective(const QpProblem & problem, const ControlAction & u);

/// Exact minimizer of the two-variable QP by enumerating active sets of size
/// 0, 1 and 2. Ties are broken toward the smallest active set, then
/// lexicographically by constraint index.
QpSolution solve_qp(const QpProblem & problem);

/// Brute-force grid search over the bound box, refined around the incumbent
/// until the grid spacing reaches `resolution`. Validation only.
QpSolution oracle_solve(const QpProblem & problem, double resolution);

/// max of stationarity, primal and complementarity violations at (u, multipliers).
double kkt_residual(
  const QpProblem & problem, const ControlAction & u, const std::vector<double> & multipliers);

}  // namespace polycbf

#endif  // POLYCBF__QP_SOLVER_HPP_
