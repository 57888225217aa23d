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

#ifndef POLYCBF__VEHICLE_MODEL_HPP_
#define POLYCBF__VEHICLE_MODEL_HPP_

#include "polycbf/geometry.hpp"

#include <Eigen/Core>

#include <numbers>
#include <vector>

namespace polycbf
{

/// Rectangular vehicle footprint covered by n identical, equidistant circles
/// along the longitudinal axis, plus kinematic bicycle geometry.
struct VehicleParams
{
  double length = 0.16;
  double width = 0.08;
  double wheelbase = 0.16;
  double rear_wheelbase = 0.08;
  int n_circles = 3;

  /// Smallest radius for which the circles cover the rectangle.
  double circle_radius() const;
  /// Distance between adjacent circle centers.
  double circle_spacing() const;
  /// Throws ConfigError on non-positive lengths or n_circles < 1.
  void validate() const;
};

/// Kinematic bicycle state. heading is wrapped to (-pi, pi].
struct VehicleState
{
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double steering = 0.0;

  Vec2 position() const { return {x, y}; }
};

/// Acceleration [m/s^2] and steering rate [rad/s].
struct ControlAction
{
  double accel = 0.0;
  double steer_rate = 0.0;

  Vec2 as_vector() const { return {accel, steer_rate}; }
  static ControlAction from_vector(const Vec2 & u) { return {u.x(), u.y()}; }
  bool operator==(const ControlAction &) const = default;
};

using StateVector = Eigen::Matrix<double, 5, 1>;

/// Steering magnitude the simulator saturates at; keeps tan(steering) finite.
inline constexpr double kMaxSteering = 0.47 * std::numbers::pi;

double wrap_angle(double angle);

/// Slip angle at the center of gravity.
double slip_angle(double steering, const VehicleParams & params);
/// d(slip angle)/d(steering).
double slip_angle_derivative(double steering, const VehicleParams & params);

/// Time derivative [x, y, heading, speed, steering].
StateVector dynamics(const VehicleState & state, const ControlAction & u, const VehicleParams & params);

/// Body-frame circle centers, index 0 at the rear. x_j = (-1/2 + (2j+1)/(2n)) * length.
std::vector<Vec2> circle_layout(const VehicleParams & params);

/// World-frame position, velocity and acceleration of one circle center.
/// The acceleration is affine in the control input:
///   accel(u) = accel_const + accel_input * [u_accel, u_steer_rate]^T.
struct CircleKinematics
{
  Vec2 center = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 accel_const = Vec2::Zero();
  Mat2 accel_input = Mat2::Zero();

  Vec2 accel(const ControlAction & u) const { return accel_const + accel_input * u.as_vector(); }
};

/// circle_index is 0-based (0 = rear-most circle).
CircleKinematics circle_kinematics(
  const VehicleState & state, const VehicleParams & params, int circle_index);

}  // namespace polycbf

#endif  // POLYCBF__VEHICLE_MODEL_HPP_
