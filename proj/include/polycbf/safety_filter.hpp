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

#ifndef POLYCBF__SAFETY_FILTER_HPP_
#define POLYCBF__SAFETY_FILTER_HPP_

#include "polycbf/cbf_constraints.hpp"
#include "polycbf/geometry.hpp"
#include "polycbf/qp_solver.hpp"
#include "polycbf/vehicle_model.hpp"

#include <vector>

namespace polycbf
{

struct FilterOutcome
{
  ControlAction u_certified;
  /// True when the certified action differs from the nominal one (inf-norm > 1e-9).
  bool was_active = false;
  /// True when the QP had no solution and the braking fallback was applied.
  bool infeasible = false;
  std::vector<CbfConstraintRow> rows;
  QpSolution qp;
  /// Wall-clock seconds spent building rows (distance field) and solving the QP.
  double distance_time = 0.0;
  double solve_time = 0.0;
};

inline constexpr double kActivityThreshold = 1e-9;

/// Maximal braking with zero steering rate, clamped to the bounds.
/// Control bounds intersected with the state-dependent limits: no steering past
/// the mechanical stop within one step, no braking through zero speed.
FilterParams state_bounds(const VehicleState & state, const FilterParams & filter);

ControlAction fallback_action(const FilterParams & filter);

/// Certifies the QP outcome for a prebuilt set of rows.
FilterOutcome certify_rows(
  const ControlAction & u_nom, const FilterParams & filter, std::vector<CbfConstraintRow> rows);

/// Builds the barrier rows for both boundaries and returns the action closest
/// to u_nom (in the R-weighted norm) that satisfies all of them.
FilterOutcome certify(
  const VehicleState & state, const ControlAction & u_nom, const VehicleParams & params,
  const FilterParams & filter, const PolylineBoundary & left, const PolylineBoundary & right);

class SafetyFilter
{
public:
  SafetyFilter(VehicleParams params, FilterParams filter);

  FilterOutcome certify(
    const VehicleState & state, const ControlAction & u_nom, const PolylineBoundary & left,
    const PolylineBoundary & right) const;

  const VehicleParams & vehicle() const { return params_; }
  const FilterParams & filter() const { return filter_; }

private:
  VehicleParams params_;
  FilterParams filter_;
};

}  // namespace polycbf

#endif  // POLYCBF__SAFETY_FILTER_HPP_
