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

#include "polycbf/vehicle_model.hpp"

#include "polycbf/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polycbf
{

double VehicleParams::circle_radius() const
{
  const double half_spacing = length / (2.0 * n_circles);
  const double half_width = width / 2.0;
  return std::sqrt(half_spacing * half_spacing + half_width * half_width);
}

double VehicleParams::circle_spacing() const { return length / n_circles; }

void VehicleParams::validate() const
{
  if (!(length > 0.0) || !(width > 0.0) || !(wheelbase > 0.0) || !(rear_wheelbase > 0.0)) {
    throw ConfigError("vehicle dimensions must be positive");
  }
  if (n_circles < 1) {
    throw ConfigError("n_circles must be >= 1, got " + std::to_string(n_circles));
  }
}

double wrap_angle(double angle)
{
  constexpr double kPi = std::numbers::pi;
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) {
    wrapped += 2.0 * kPi;
  }
  return wrapped;
}

double slip_angle(double steering, const VehicleParams & params)
{
  return std::atan(params.rear_wheelbase / params.wheelbase * std::tan(steering));
}

double slip_angle_derivative(double steering, const VehicleParams & params)
{
  const double k = params.rear_wheelbase / params.wheelbase;
  const double tan_d = std::tan(steering);
  const double sec2 = 1.0 + tan_d * tan_d;
  return k * sec2 / (1.0 + k * k * tan_d * tan_d);
}

StateVector dynamics(const VehicleState & state, const ControlAction & u, const VehicleParams & params)
{
  const double beta = slip_angle(state.steering, params);
  StateVector dx;
  dx[0] = state.speed * std::cos(state.heading + beta);
  dx[1] = state.speed * std::sin(state.heading + beta);
  dx[2] = state.speed / params.wheelbase * std::tan(state.steering) * std::cos(beta);
  dx[3] = u.accel;
  dx[4] = u.steer_rate;
  return dx;
}

std::vector<Vec2> circle_layout(const VehicleParams & params)
{
  std::vector<Vec2> centers;
  centers.reserve(params.n_circles);
  for (int j = 0; j < params.n_circles; ++j) {
    const double x = (-0.5 + (2.0 * j + 1.0) / (2.0 * params.n_circles)) * params.length;
    centers.emplace_back(x, 0.0);
  }
  return centers;
}

CircleKinematics circle_kinematics(
  const VehicleState & state, const VehicleParams & params, int circle_index)
{
  if (circle_index < 0 || circle_index >= params.n_circles) {
    throw std::out_of_range("circle index " + std::to_string(circle_index) + " out of range");
  }
  const double offset =
    (-0.5 + (2.0 * circle_index + 1.0) / (2.0 * params.n_circles)) * params.length;

  const double v = state.speed;
  const double psi = state.heading;
  const double delta = state.steering;
  const double beta = slip_angle(delta, params);
  const double dbeta = slip_angle_derivative(delta, params);
  const double tan_d = std::tan(delta);
  const double sec2_d = 1.0 + tan_d * tan_d;
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  const double c_pb = std::cos(psi + beta);
  const double s_pb = std::sin(psi + beta);
  const double c_p = std::cos(psi);
  const double s_p = std::sin(psi);

  const double x_dot = v * c_pb;
  const double y_dot = v * s_pb;
  const double psi_dot = v / params.wheelbase * tan_d * cb;

  // Second derivatives of the bicycle states, split as const + row * u.
  const Eigen::RowVector2d psi_ddot_u(
    tan_d * cb / params.wheelbase, v / params.wheelbase * (sec2_d * cb - tan_d * sb * dbeta));
  const double x_ddot_c = -v * s_pb * psi_dot;
  const Eigen::RowVector2d x_ddot_u(c_pb, -v * s_pb * dbeta);
  const double y_ddot_c = v * c_pb * psi_dot;
  const Eigen::RowVector2d y_ddot_u(s_pb, v * c_pb * dbeta);

  CircleKinematics k;
  k.center = Vec2(c_p * offset + state.x, s_p * offset + state.y);
  k.velocity = Vec2(-s_p * psi_dot * offset + x_dot, c_p * psi_dot * offset + y_dot);
  k.accel_const = Vec2(
    -c_p * psi_dot * psi_dot * offset + x_ddot_c, -s_p * psi_dot * psi_dot * offset + y_ddot_c);
  k.accel_input.row(0) = -s_p * offset * psi_ddot_u + x_ddot_u;
  k.accel_input.row(1) = c_p * offset * psi_ddot_u + y_ddot_u;
  return k;
}

}  // namespace polycbf
