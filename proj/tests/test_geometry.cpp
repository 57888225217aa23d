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


#include "oracles.hpp"

#include "polycbf/errors.hpp"
#include "polycbf/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace polycbf
{
namespace
{

using testing::distance_to_vertex_normals;
using testing::orthogonality_residual;
using testing::regular_polygon;
using testing::richardson_gradient;
using testing::scan_polyline;
using testing::scan_segment;

PolylineBoundary straight_x(InteriorSide side = InteriorSide::kLeftOfTravel)
{
  return PolylineBoundary({Vec2(-1.0, 0.0), Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(2.0, 0.0)}, side);
}

// Three segments with a left and a right bend.
PolylineBoundary three_segment()
{
  return PolylineBoundary(
    {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(2.0, 0.6), Vec2(3.0, 0.4)}, InteriorSide::kLeftOfTravel);
}

TEST(TangentSegment, RejectsDegenerateInput)
{
  EXPECT_THROW(
    TangentSegment(Vec2(0, 0), Vec2(0, 0), Vec2(1, 0), Vec2(1, 0)), DegenerateSegment);
  EXPECT_THROW(
    TangentSegment(Vec2(0, 0), Vec2(1, 0), Vec2(0, 0), Vec2(1, 0)), DegenerateSegment);
}

TEST(TangentSegment, NormalizesTangents)
{
  const TangentSegment seg(Vec2(0, 0), Vec2(1, 0), Vec2(3, 0), Vec2(2, 2));
  EXPECT_NEAR(seg.t1().norm(), 1.0, 1e-15);
  EXPECT_NEAR(seg.t2().norm(), 1.0, 1e-15);
  EXPECT_NEAR(seg.t2().x(), std::sqrt(0.5), 1e-15);
}

TEST(PolylineBoundary, ValidatesPoints)
{
  EXPECT_THROW(PolylineBoundary({Vec2(0, 0)}, InteriorSide::kLeftOfTravel), EmptyBoundary);
  EXPECT_THROW(
    PolylineBoundary({Vec2(0, 0), Vec2(1, 0), Vec2(1, 0)}, InteriorSide::kLeftOfTravel),
    DegenerateSegment);
  EXPECT_THROW(
    PolylineBoundary({Vec2(0, 0), Vec2(1, 0)}, InteriorSide::kLeftOfTravel, {Vec2(1, 0)}),
    std::invalid_argument);
}

TEST(PolylineBoundary, ChordTangentsByDefault)
{
  const PolylineBoundary b(
    {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1)}, InteriorSide::kLeftOfTravel);
  ASSERT_EQ(b.tangents().size(), 3u);
  EXPECT_NEAR((b.tangents()[0] - Vec2(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((b.tangents()[1] - Vec2(1, 1).normalized()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((b.tangents()[2] - Vec2(0, 1)).norm(), 0.0, 1e-15);
  ASSERT_EQ(b.segments().size(), 2u);
  // Adjacent segments share the junction tangent.
  EXPECT_EQ(b.segments()[0].t2(), b.segments()[1].t1());
}

TEST(SegmentPseudoDistance, PointAtStart)
{
  const TangentSegment seg(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(1, 1));
  const auto d = segment_pseudo_distance(Vec2(0, 0), seg);
  EXPECT_DOUBLE_EQ(d.magnitude, 0.0);
  EXPECT_DOUBLE_EQ(d.lambda, 0.0);
}

TEST(SegmentPseudoDistance, AlignedTangentsArePerpendicular)
{
  const TangentSegment seg(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(1, 0));
  const auto d = segment_pseudo_distance(Vec2(0.5, 0.3), seg);
  EXPECT_NEAR(d.magnitude, 0.3, 1e-15);
  EXPECT_NEAR(d.lambda, 0.5, 1e-15);
}

TEST(SegmentPseudoDistance, MatchesDenseLambdaScan)
{
  const TangentSegment seg(Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(1, 1));
  for (const Vec2 & p : {Vec2(0.9, 0.2), Vec2(0.5, 0.2), Vec2(0.2, 0.6)}) {
    // Minimize |n . t| over a 1e-6 grid.
    double best_lambda = 0.0;
    double best_res = std::abs(orthogonality_residual(p, seg, 0.0));
    for (int i = 1; i <= 1000000; ++i) {
      const double l = i * 1e-6;
      const double r = std::abs(orthogonality_residual(p, seg, l));
      if (r < best_res) {
        best_res = r;
        best_lambda = l;
      }
    }
    const Vec2 foot = best_lambda * seg.p2() + (1.0 - best_lambda) * seg.p1();
    const auto d = segment_pseudo_distance(p, seg);
    EXPECT_NEAR(d.lambda, best_lambda, 2e-6) << p.transpose();
    EXPECT_NEAR(d.magnitude, (p - foot).norm(), 2e-6) << p.transpose();
    if (best_res < 1e-5) {
      EXPECT_LE(std::abs(orthogonality_residual(p, seg, d.lambda)), 1e-9);
    } else {
      // No root inside the segment: the scan ends up on an endpoint.
      EXPECT_TRUE(d.lambda == 0.0 || d.lambda == 1.0);
    }
  }
}

TEST(SegmentPseudoDistance, RandomSegmentsAgreeWithRootScan)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec2 p1(u(rng), u(rng));
    const Vec2 p2 = p1 + Vec2(1.0 + 0.5 * u(rng), 0.4 * u(rng));
    const double a1 = 0.6 * u(rng);
    const double a2 = 0.6 * u(rng);
    const TangentSegment seg(
      p1, p2, Vec2(std::cos(a1), std::sin(a1)), Vec2(std::cos(a2), std::sin(a2)));
    const Vec2 p(p1.x() + 2.0 * u(rng), p1.y() + u(rng));
    const auto got = segment_pseudo_distance(p, seg);
    const auto want = scan_segment(p, seg);
    EXPECT_NEAR(got.magnitude, want.magnitude, 1e-9) << "trial " << trial;
  }
}

TEST(SignedPseudoDistance, StraightBoundarySign)
{
  const auto b = straight_x();
  EXPECT_NEAR(signed_pseudo_distance(Vec2(0.5, 0.1), b).value, 0.1, 1e-15);
  EXPECT_NEAR(signed_pseudo_distance(Vec2(0.5, -0.1), b).value, -0.1, 1e-15);
  const auto r = straight_x(InteriorSide::kRightOfTravel);
  EXPECT_NEAR(signed_pseudo_distance(Vec2(0.5, 0.1), r).value, -0.1, 1e-15);
}

TEST(SignedPseudoDistance, ZeroOnBoundary)
{
  const auto b = three_segment();
  EXPECT_EQ(signed_pseudo_distance(Vec2(1.0, 0.0), b).value, 0.0);
  EXPECT_NEAR(signed_pseudo_distance(Vec2(1.5, 0.3), b).value, 0.0, 1e-12);
}

TEST(SignedPseudoDistance, ThreeSegmentMatchesScanOracle)
{
  const auto b = three_segment();
  for (const Vec2 & p : {Vec2(1.1, 0.3), Vec2(1.9, 0.9), Vec2(0.5, 0.4), Vec2(2.5, 0.9)}) {
    EXPECT_NEAR(std::abs(signed_pseudo_distance(p, b).value), scan_polyline(p, b), 1e-6)
      << p.transpose();
  }
}

TEST(SignedPseudoDistance, CoarseBound)
{
  const auto b = three_segment();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-1.0, 4.0);
  std::uniform_real_distribution<double> uy(-1.5, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p(ux(rng), uy(rng));
    double bound = std::numeric_limits<double>::infinity();
    for (const auto & seg : b.segments()) {
      bound = std::min(
        bound, std::min((p - seg.p1()).norm(), (p - seg.p2()).norm()) + seg.length());
    }
    EXPECT_LE(std::abs(signed_pseudo_distance(p, b).value), bound + 1e-12);
  }
}

TEST(SignedPseudoDistance, SignFlipsOnceAcrossBoundary)
{
  const auto b = three_segment();
  for (double x : {0.3, 1.2, 1.7, 2.6}) {
    int flips = 0;
    double prev = signed_pseudo_distance(Vec2(x, -0.5), b).value;
    for (int k = 1; k <= 4000; ++k) {
      const double cur = signed_pseudo_distance(Vec2(x, -0.5 + k * 4e-4), b).value;
      if ((cur > 0.0) != (prev > 0.0)) {
        ++flips;
      }
      prev = cur;
    }
    EXPECT_EQ(flips, 1) << "x = " << x;
  }
}

TEST(DistanceGradient, StraightBoundary)
{
  const auto b = straight_x();
  const Vec2 g = distance_gradient(Vec2(0.3, 0.2), b, 1e-5);
  EXPECT_NEAR(g.x(), 0.0, 1e-6);
  EXPECT_NEAR(g.y(), 1.0, 1e-6);
  EXPECT_NEAR(g.norm(), 1.0, 1e-6);
}

TEST(DistanceGradient, RejectsNonPositiveStep)
{
  EXPECT_THROW(distance_gradient(Vec2(0, 1), straight_x(), 0.0), std::invalid_argument);
  EXPECT_THROW(distance_hessian(Vec2(0, 1), straight_x(), -1.0), std::invalid_argument);
}

TEST(DistanceGradient, JunctionAdjacentMatchesRichardson)
{
  const auto b = three_segment();
  auto f = [&](const Vec2 & q) { return signed_pseudo_distance(q, b).value; };
  // Near the first junction but clear of its normal line.
  const Vec2 p(1.02, 0.25);
  ASSERT_GT(distance_to_vertex_normals(p, b, 1.0), 1e-3);
  const Vec2 ref = richardson_gradient(f, p, 2e-4);
  const Vec2 g = distance_gradient(p, b, 1e-5);
  EXPECT_LE((g - ref).norm(), 1e-4 * ref.norm());
}

TEST(DistanceGradient, SecondOrderStepScaling)
{
  const auto b = three_segment();
  const Vec2 p(1.6, 0.6);
  const Vec2 g1 = distance_gradient(p, b, 4e-3);
  const Vec2 g2 = distance_gradient(p, b, 2e-3);
  const Vec2 g3 = distance_gradient(p, b, 1e-3);
  const double ratio = (g1 - g2).norm() / (g2 - g3).norm();
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(DistanceGradient, MagnitudeInSanityBand)
{
  const auto b = three_segment();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.2, 2.8);
  std::uniform_real_distribution<double> uy(0.05, 0.4);
  for (int i = 0; i < 200; ++i) {
    const Vec2 q(ux(rng), 0.0);
    const Vec2 p(q.x(), uy(rng) + (q.x() < 1.0 ? 0.0 : 0.6 * std::min(q.x() - 1.0, 1.0)));
    if (distance_to_vertex_normals(p, b, 2.0) < 1e-3) {
      continue;
    }
    const double n = distance_gradient(p, b, 1e-5).norm();
    EXPECT_GE(n, 0.5);
    EXPECT_LE(n, 2.0);
  }
}

TEST(DistanceHessian, StraightBoundaryIsFlat)
{
  const Mat2 h = distance_hessian(Vec2(0.4, 0.3), straight_x(), 1e-3);
  EXPECT_LE(h.cwiseAbs().maxCoeff(), 1e-4);
}

TEST(DistanceHessian, SymmetricAfterSymmetrization)
{
  const Mat2 h = distance_hessian(Vec2(1.3, 0.4), three_segment(), 1e-3);
  EXPECT_EQ(h(0, 1), h(1, 0));
}

TEST(DistanceHessian, RegularPolygonCurvature)
{
  // Counter-clockwise 64-gon with the inside as interior: d ~ 1 - r, so at
  // r = 0.5 the curvature along the level-set tangent is -1/0.5 = -2.
  // Inside one segment the field bends the other way and the vertex kinks
  // carry the rest, so compare the average over one angular period.
  const PolylineBoundary b(regular_polygon(64, 1.0), InteriorSide::kLeftOfTravel);
  constexpr int kSamples = 1000;
  double tangential_sum = 0.0;
  double radial_sum = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double angle = (10.0 + (i + 0.5) / kSamples) * 2.0 * std::numbers::pi / 64.0;
    const Vec2 radial(std::cos(angle), std::sin(angle));
    const Vec2 tangential(-radial.y(), radial.x());
    const DistanceEvaluation ev = polyline_pseudo_distance(0.5 * radial, b);
    ASSERT_GT(ev.value, 0.0);
    tangential_sum += tangential.dot(ev.hessian * tangential);
    radial_sum += radial.dot(ev.hessian * radial);
  }
  EXPECT_NEAR(tangential_sum / kSamples, -2.0, 0.1);
  EXPECT_NEAR(radial_sum / kSamples, 0.0, 0.1);
}

TEST(DistanceHessian, SegmentInteriorBendsAwayFromKinks)
{
  // Mid-segment the foot lies on the chord while the normal tilts, giving
  // |n| = D / cos(theta) and a positive tangential curvature.
  const PolylineBoundary b(regular_polygon(64, 1.0), InteriorSide::kLeftOfTravel);
  const double angle = 10.5 * 2.0 * std::numbers::pi / 64.0;
  const Vec2 radial(std::cos(angle), std::sin(angle));
  const Vec2 tangential(-radial.y(), radial.x());
  const Mat2 h = distance_hessian(0.5 * radial, b, 1e-3);
  EXPECT_GT(tangential.dot(h * tangential), 0.0);
}

TEST(PolylinePseudoDistance, PopulatesAllFields)
{
  const auto b = three_segment();
  const DistanceEvaluation ev = polyline_pseudo_distance(Vec2(1.5, 0.5), b);
  const SignedDistance sd = signed_pseudo_distance(Vec2(1.5, 0.5), b);
  EXPECT_EQ(ev.value, sd.value);
  EXPECT_EQ(ev.segment_index, 1u);
  EXPECT_GE(ev.lambda, 0.0);
  EXPECT_LE(ev.lambda, 1.0);
  EXPECT_TRUE(ev.gradient.allFinite());
  EXPECT_TRUE(ev.hessian.allFinite());
}

TEST(PolylineHelpers, ProjectionAndArcLength)
{
  const std::vector<Vec2> path{Vec2(0, 0), Vec2(1, 0), Vec2(1, 2)};
  EXPECT_DOUBLE_EQ(polyline_length(path), 3.0);
  const auto proj = project_onto_polyline(Vec2(1.5, 1.0), path);
  EXPECT_NEAR(proj.arc_length, 2.0, 1e-15);
  EXPECT_NEAR(proj.distance, 0.5, 1e-15);
  EXPECT_EQ(proj.segment_index, 1u);
  EXPECT_NEAR((point_at_arc_length(path, 1.5) - Vec2(1.0, 0.5)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((direction_at_arc_length(path, 0.5) - Vec2(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(euclidean_distance(Vec2(-1, 0), path), 1.0, 1e-15);
}

}  // namespace
}  // namespace polycbf
