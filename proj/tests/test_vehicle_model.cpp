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
#include "polycbf/vehicle_model.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace polycbf
{
namespace
{

VehicleState add(const VehicleState & s, const StateVector & d, double k)
{
  return {
    s.x + k * d[0], s.y + k * d[1], s.heading + k * d[2], s.speed + k * d[3],
    s.steering + k * d[4]};
}

// Plain RK4 on the state derivative; negative dt integrates backwards.
VehicleState integrate(
  const VehicleState & s, const ControlAction & u, double dt, const VehicleParams & p)
{
  const StateVector k1 = dynamics(s, u, p);
  const StateVector k2 = dynamics(add(s, k1, 0.5 * dt), u, p);
  const StateVector k3 = dynamics(add(s, k2, 0.5 * dt), u, p);
  const StateVector k4 = dynamics(add(s, k3, dt), u, p);
  return add(s, (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0, dt);
}

Vec2 world_center(const VehicleState & s, double offset)
{
  return {s.x + std::cos(s.heading) * offset, s.y + std::sin(s.heading) * offset};
}

TEST(VehicleParams, TableRadius)
{
  const VehicleParams p;
  EXPECT_NEAR(p.circle_radius(), 0.048, 1e-3);
  EXPECT_NEAR(p.circle_spacing(), 0.0533, 1e-4);
}

TEST(VehicleParams, Validation)
{
  VehicleParams p;
  p.n_circles = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = VehicleParams{};
  p.width = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_NO_THROW(VehicleParams{}.validate());
}

TEST(CircleLayout, ThreeCircles)
{
  const auto c = circle_layout(VehicleParams{});
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0].x(), -0.0533, 1e-4);
  EXPECT_NEAR(c[1].x(), 0.0, 1e-15);
  EXPECT_NEAR(c[2].x(), 0.0533, 1e-4);
  EXPECT_NEAR(c[1].x() - c[0].x(), 0.053, 1e-3);
  for (const auto & v : c) {
    EXPECT_EQ(v.y(), 0.0);
  }
}

TEST(CircleLayout, SingleCircleAtOrigin)
{
  VehicleParams p;
  p.n_circles = 1;
  const auto c = circle_layout(p);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], Vec2(0.0, 0.0));
}

TEST(CircleLayout, CoversRectangle)
{
  for (int n = 1; n <= 5; ++n) {
    VehicleParams p;
    p.n_circles = n;
    const auto centers = circle_layout(p);
    const double r = p.circle_radius();
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> ux(-0.5 * p.length, 0.5 * p.length);
    std::uniform_real_distribution<double> uy(-0.5 * p.width, 0.5 * p.width);
    for (int i = 0; i < 10000; ++i) {
      const Vec2 q(ux(rng), uy(rng));
      double best = 1e9;
      for (const auto & c : centers) {
        best = std::min(best, (q - c).norm());
      }
      ASSERT_LE(best, r + 1e-12) << "n = " << n;
    }
  }
}

TEST(CircleLayout, RadiusIsTight)
{
  for (int n = 1; n <= 5; ++n) {
    VehicleParams p;
    p.n_circles = n;
    const auto centers = circle_layout(p);
    const double r = 0.999 * p.circle_radius();
    const double hx = 0.5 * p.length;
    const double hy = 0.5 * p.width;
    bool uncovered = false;
    for (const Vec2 & q :
         {Vec2(hx, hy), Vec2(-hx, hy), Vec2(hx, -hy), Vec2(-hx, -hy), Vec2(0, hy), Vec2(hx, 0)}) {
      double best = 1e9;
      for (const auto & c : centers) {
        best = std::min(best, (q - c).norm());
      }
      uncovered = uncovered || best > r;
    }
    EXPECT_TRUE(uncovered) << "n = " << n;
  }
}

TEST(Dynamics, AtRest)
{
  const VehicleState s{1.0, 2.0, 0.3, 0.0, 0.2};
  const StateVector d = dynamics(s, {1.5, -0.5}, VehicleParams{});
  EXPECT_EQ(d[0], 0.0);
  EXPECT_EQ(d[1], 0.0);
  EXPECT_EQ(d[2], 0.0);
  EXPECT_EQ(d[3], 1.5);
  EXPECT_EQ(d[4], -0.5);
}

TEST(Dynamics, StraightDriving)
{
  const VehicleState s{0.0, 0.0, 0.7, 0.4, 0.0};
  const StateVector d = dynamics(s, {}, VehicleParams{});
  EXPECT_NEAR(d[0], 0.4 * std::cos(0.7), 1e-15);
  EXPECT_NEAR(d[1], 0.4 * std::sin(0.7), 1e-15);
  EXPECT_EQ(d[2], 0.0);
}

TEST(Dynamics, SlipAngleAndYawRate)
{
  const VehicleState s{0.0, 0.0, 0.0, 1.0, 0.1};
  const double beta = std::atan(0.5 * std::tan(0.1));
  EXPECT_NEAR(slip_angle(0.1, VehicleParams{}), beta, 1e-15);
  const StateVector d = dynamics(s, {}, VehicleParams{});
  EXPECT_NEAR(d[2], 1.0 / 0.16 * std::tan(0.1) * std::cos(beta), 1e-14);
  EXPECT_NEAR(d[0], std::cos(beta), 1e-15);
  EXPECT_NEAR(d[1], std::sin(beta), 1e-15);
}

TEST(Dynamics, SlipAngleDerivativeMatchesDifference)
{
  const VehicleParams p;
  for (double delta : {-1.2, -0.4, 0.0, 0.3, 1.1}) {
    const double h = 1e-6;
    const double fd = (slip_angle(delta + h, p) - slip_angle(delta - h, p)) / (2.0 * h);
    EXPECT_NEAR(slip_angle_derivative(delta, p), fd, 1e-8);
  }
}

TEST(WrapAngle, HalfOpenInterval)
{
  EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(-std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(0.5), 0.5, 1e-15);
  EXPECT_NEAR(wrap_angle(-7.0), -7.0 + 2.0 * std::numbers::pi, 1e-12);
}

TEST(CircleKinematics, CenterCircleAtOrigin)
{
  const VehicleParams p;
  const VehicleState s{0.3, -0.2, 0.0, 0.5, 0.2};
  const CircleKinematics k = circle_kinematics(s, p, 1);
  const StateVector d = dynamics(s, {}, p);
  EXPECT_NEAR((k.center - Vec2(0.3, -0.2)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((k.velocity - Vec2(d[0], d[1])).norm(), 0.0, 1e-15);
}

TEST(CircleKinematics, AtRestVelocityVanishes)
{
  const VehicleParams p;
  const VehicleState s{0.0, 0.0, std::numbers::pi / 2.0, 0.0, 0.0};
  const CircleKinematics k = circle_kinematics(s, p, 2);
  EXPECT_NEAR(k.center.y(), 0.0533, 1e-4);
  EXPECT_EQ(k.velocity.norm(), 0.0);
  // v = 0 leaves the steering column without authority.
  EXPECT_EQ(k.accel_input.col(1).norm(), 0.0);
}

TEST(CircleKinematics, RejectsBadIndex)
{
  EXPECT_THROW(circle_kinematics(VehicleState{}, VehicleParams{}, 3), std::out_of_range);
  EXPECT_THROW(circle_kinematics(VehicleState{}, VehicleParams{}, -1), std::out_of_range);
}

TEST(CircleKinematics, AffineInInput)
{
  const VehicleParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const VehicleState s{u(rng), u(rng), 3.0 * u(rng), u(rng), 0.6 * u(rng)};
    const CircleKinematics k = circle_kinematics(s, p, i % 3);
    const ControlAction ua{10.0 * u(rng), 10.0 * u(rng)};
    const ControlAction ub{10.0 * u(rng), 10.0 * u(rng)};
    const double t = 0.5 * (u(rng) + 1.0);
    const ControlAction mix{
      t * ua.accel + (1.0 - t) * ub.accel, t * ua.steer_rate + (1.0 - t) * ub.steer_rate};
    const Vec2 lhs = k.accel(mix);
    const Vec2 rhs = t * k.accel(ua) + (1.0 - t) * k.accel(ub);
    EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST(CircleKinematics, DerivativesMatchTimeDifferences)
{
  const VehicleParams p;
  const auto layout = circle_layout(p);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const VehicleState s{u(rng), u(rng), 3.0 * u(rng), u(rng), 0.6 * u(rng)};
    const ControlAction a{5.0 * u(rng), 5.0 * u(rng)};
    const int j = i % 3;
    const double h = 1e-4;
    const Vec2 cp = world_center(integrate(s, a, h, p), layout[j].x());
    const Vec2 c0 = world_center(s, layout[j].x());
    const Vec2 cm = world_center(integrate(s, a, -h, p), layout[j].x());
    const CircleKinematics k = circle_kinematics(s, p, j);
    const Vec2 vel = (cp - cm) / (2.0 * h);
    const Vec2 acc = (cp - 2.0 * c0 + cm) / (h * h);
    EXPECT_NEAR((k.center - c0).norm(), 0.0, 1e-15);
    EXPECT_LE((vel - k.velocity).norm(), 1e-6 * std::max(1.0, k.velocity.norm()));
    EXPECT_LE((acc - k.accel(a)).norm(), 1e-3 * std::max(1e-3, k.accel(a).norm())) << i;
  }
}

TEST(CircleKinematics, FrameConsistency)
{
  const VehicleParams p;
  const FilterParams f;
  const PolylineBoundary left(
    {Vec2(-1, 0.15), Vec2(0, 0.15), Vec2(0.5, 0.2), Vec2(1, 0.35)}, InteriorSide::kRightOfTravel);
  const PolylineBoundary right(
    {Vec2(-1, -0.15), Vec2(0, -0.15), Vec2(0.5, -0.1), Vec2(1, 0.05)}, InteriorSide::kLeftOfTravel);
  const VehicleState s{0.1, 0.02, 0.1, 0.4, 0.2};
  const auto base = build_all_rows(s, p, f, left, right);

  for (double rot : {0.4, -1.3, 2.9}) {
    const Eigen::Rotation2Dd r(rot);
    auto rotate = [&](const PolylineBoundary & b) {
      std::vector<Vec2> pts;
      for (const auto & q : b.points()) {
        pts.push_back(r * q);
      }
      return PolylineBoundary(pts, b.interior_side());
    };
    const Vec2 pos = r * s.position();
    const VehicleState rs{pos.x(), pos.y(), s.heading + rot, s.speed, s.steering};
    const auto rows = build_all_rows(rs, p, f, rotate(left), rotate(right));
    ASSERT_EQ(rows.size(), base.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_NEAR(rows[i].h, base[i].h, 1e-9);
      EXPECT_NEAR(rows[i].h_dot, base[i].h_dot, 1e-6);
    }
  }
}

}  // namespace
}  // namespace polycbf
