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

#ifndef POLYCBF__GEOMETRY_HPP_
#define POLYCBF__GEOMETRY_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace polycbf
{

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline double cross2(const Vec2 & a, const Vec2 & b) { return a.x() * b.y() - a.y() * b.x(); }

/// Which side of the direction of travel along a boundary is drivable.
enum class InteriorSide { kLeftOfTravel, kRightOfTravel };

/// Line segment whose end points carry unit tangent vectors. The tangent
/// field along the segment is the linear interpolation of the two.
class TangentSegment
{
public:
  static constexpr double kMinLength = 1e-9;

  /// Throws DegenerateSegment if |p2 - p1| <= kMinLength or a tangent is zero.
  TangentSegment(const Vec2 & p1, const Vec2 & p2, const Vec2 & t1, const Vec2 & t2);

  const Vec2 & p1() const { return p1_; }
  const Vec2 & p2() const { return p2_; }
  const Vec2 & t1() const { return t1_; }
  const Vec2 & t2() const { return t2_; }
  double length() const { return (p2_ - p1_).norm(); }

private:
  Vec2 p1_, p2_, t1_, t2_;
};

/// Open polyline road boundary.
///
/// Tangents that are not supplied default to the normalized chord through the
/// neighbouring points (p[k-1] -> p[k+1]); the two end points use their
/// adjacent chord. Segment k uses tangents k and k+1, so the interpolated
/// tangent field is continuous across junctions.
class PolylineBoundary
{
public:
  PolylineBoundary() = default;

  /// Throws EmptyBoundary for fewer than two points, DegenerateSegment for
  /// coincident consecutive points, and std::invalid_argument when the
  /// tangent count does not match the point count.
  PolylineBoundary(
    std::vector<Vec2> points, InteriorSide interior_side, std::vector<Vec2> tangents = {});

  const std::vector<Vec2> & points() const { return points_; }
  const std::vector<Vec2> & tangents() const { return tangents_; }
  const std::vector<TangentSegment> & segments() const { return segments_; }
  InteriorSide interior_side() const { return interior_side_; }
  bool empty() const { return segments_.empty(); }

private:
  std::vector<Vec2> points_;
  std::vector<Vec2> tangents_;
  std::vector<TangentSegment> segments_;
  InteriorSide interior_side_ = InteriorSide::kLeftOfTravel;
};

struct SegmentDistance
{
  double magnitude = 0.0;
  double lambda = 0.0;
  /// False when the end point fallback was used.
  bool orthogonal = false;
};

/// Unsigned pseudo-distance from p to a tangent segment: |p - p(lambda)|
/// where the offset is orthogonal to the interpolated tangent t(lambda).
/// When no orthogonal foot exists on the segment the nearer end point is used.
SegmentDistance segment_pseudo_distance(const Vec2 & p, const TangentSegment & seg);

/// Signed pseudo-distance without derivatives: the minimum of the per-segment
/// values over all segments.
struct SignedDistance
{
  double value = 0.0;
  std::size_t segment_index = 0;
  double lambda = 0.0;
};

SignedDistance signed_pseudo_distance(const Vec2 & p, const PolylineBoundary & boundary);

struct DifferentiationSteps
{
  double gradient = 1e-5;
  double hessian = 1e-3;
};

struct DistanceEvaluation
{
  double value = 0.0;
  Vec2 gradient = Vec2::Zero();
  Mat2 hessian = Mat2::Zero();
  std::size_t segment_index = 0;
  double lambda = 0.0;
};

/// Signed pseudo-distance (positive on the interior side) with central
/// finite-difference gradient and Hessian.
DistanceEvaluation polyline_pseudo_distance(
  const Vec2 & p, const PolylineBoundary & boundary, const DifferentiationSteps & steps = {});

Vec2 distance_gradient(const Vec2 & p, const PolylineBoundary & boundary, double step);

/// Central second differences, symmetrized.
Mat2 distance_hessian(const Vec2 & p, const PolylineBoundary & boundary, double step);

/// Plain Euclidean point-to-polyline distance (unsigned).
double euclidean_distance(const Vec2 & p, const std::vector<Vec2> & polyline);

/// Closest point on a polyline in the Euclidean sense, with the arc length
/// of that point measured from the first vertex.
struct PolylineProjection
{
  Vec2 point = Vec2::Zero();
  double arc_length = 0.0;
  double distance = 0.0;
  std::size_t segment_index = 0;
};

PolylineProjection project_onto_polyline(const Vec2 & p, const std::vector<Vec2> & polyline);

double polyline_length(const std::vector<Vec2> & polyline);

/// Point at a given arc length (clamped to the polyline extent).
Vec2 point_at_arc_length(const std::vector<Vec2> & polyline, double s);

/// Unit direction of the segment containing arc length s.
Vec2 direction_at_arc_length(const std::vector<Vec2> & polyline, double s);

}  // namespace polycbf

#endif  // POLYCBF__GEOMETRY_HPP_
