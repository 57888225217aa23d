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

#ifndef POLYCBF__CBF_CONSTRAINTS_HPP_
#define POLYCBF__CBF_CONSTRAINTS_HPP_

#include "polycbf/geometry.hpp"
#include "polycbf/vehicle_model.hpp"

#include <string_view>
#include <vector>

namespace polycbf
{

enum class BoundarySide { kLeft, kRight };

std::string_view to_string(BoundarySide side);

struct FilterParams
{
  double dt = 0.05;
  /// Linear class-K coefficient: alpha(h) = alpha1 * h.
  double alpha1 = 0.1;
  /// Right-hand residual gamma * dt^3 of the truncated Taylor condition [m].
  double gamma_term = 0.0;
  ControlAction u_min{-40.0, -40.0};
  ControlAction u_max{40.0, 40.0};
  /// Diagonal of the QP weight R (accel, steering rate).
  Vec2 weights{30.0, 1.0};
  DifferentiationSteps steps{};

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// One affine constraint a . u >= b with the barrier state that produced it.
struct CbfConstraintRow
{
  Vec2 a = Vec2::Zero();
  double b = 0.0;
  double h = 0.0;
  double h_dot = 0.0;
  int circle_index = 0;
  BoundarySide side = BoundarySide::kLeft;
};

struct BarrierValue
{
  double h = 0.0;
  Vec2 gradient = Vec2::Zero();
  Mat2 hessian = Mat2::Zero();
};

/// h = signed pseudo-distance of the circle center minus the circle radius.
BarrierValue evaluate_barrier(
  const CircleKinematics & kin, double radius, const PolylineBoundary & boundary,
  const DifferentiationSteps & steps = {});

/// Second-order truncated Taylor condition
///   dt * h' + dt^2/2 * h''(u) + alpha1 * h >= gamma_term
/// rearranged to a . u >= b.
CbfConstraintRow build_row(
  const VehicleState & state, const VehicleParams & params, const FilterParams & filter,
  int circle_index, const PolylineBoundary & boundary, BoundarySide side);

/// 2 * n_circles rows ordered by circle, left before right.
std::vector<CbfConstraintRow> build_all_rows(
  const VehicleState & state, const VehicleParams & params, const FilterParams & filter,
  const PolylineBoundary & left, const PolylineBoundary & right);

/// Smallest h over all circles and both boundaries (value only).
double min_barrier(
  const VehicleState & state, const VehicleParams & params, const PolylineBoundary & left,
  const PolylineBoundary & right);

}  // namespace polycbf

#endif  // POLYCBF__CBF_CONSTRAINTS_HPP_
