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

#include "polycbf/geometry.hpp"

#include "polycbf/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace polycbf
{

namespace
{

constexpr double kLinearThreshold = 1e-12;
constexpr double kRootSlack = 1e-12;

Vec2 normalized_or_throw(const Vec2 & t, const char * what)
{
  const double n = t.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DegenerateSegment(std::string(what) + " tangent is zero or non-finite");
  }
  // Already-unit tangents are kept bit-for-bit so that reloading a saved
  // boundary reproduces it exactly.
  return std::abs(n - 1.0) <= 1e-12 ? t : Vec2(t / n);
}

// Distance from p to the axis-aligned bounding box of the segment.
double bbox_distance(const Vec2 & p, const TangentSegment & seg)
{
  const double min_x = std::min(seg.p1().x(), seg.p2().x());
  const double max_x = std::max(seg.p1().x(), seg.p2().x());
  const double min_y = std::min(seg.p1().y(), seg.p2().y());
  const double max_y = std::max(seg.p1().y(), seg.p2().y());
  const double dx = std::max({min_x - p.x(), 0.0, p.x() - max_x});
  const double dy = std::max({min_y - p.y(), 0.0, p.y() - max_y});
  return std::hypot(dx, dy);
}

double signed_value(const Vec2 & p, const PolylineBoundary & boundary)
{
  return signed_pseudo_distance(p, boundary).value;
}

}  // namespace

TangentSegment::TangentSegment(const Vec2 & p1, const Vec2 & p2, const Vec2 & t1, const Vec2 & t2)
: p1_(p1), p2_(p2)
{
  if (!p1.allFinite() || !p2.allFinite() || !((p2 - p1).norm() > kMinLength)) {
    throw DegenerateSegment("segment length below threshold");
  }
  t1_ = normalized_or_throw(t1, "start");
  t2_ = normalized_or_throw(t2, "end");
}

PolylineBoundary::PolylineBoundary(
  std::vector<Vec2> points, InteriorSide interior_side, std::vector<Vec2> tangents)
: points_(std::move(points)), interior_side_(interior_side)
{
  const std::size_t n = points_.size();
  if (n < 2) {
    throw EmptyBoundary("boundary needs at least two points, got " + std::to_string(n));
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!((points_[k + 1] - points_[k]).norm() > TangentSegment::kMinLength)) {
      throw DegenerateSegment(
        "consecutive boundary points " + std::to_string(k) + " and " + std::to_string(k + 1) +
        " coincide");
    }
  }

  if (tangents.empty()) {
    tangents_.resize(n);
    tangents_[0] = (points_[1] - points_[0]).normalized();
    tangents_[n - 1] = (points_[n - 1] - points_[n - 2]).normalized();
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const Vec2 chord = points_[k + 1] - points_[k - 1];
      // A hairpin (p[k-1] == p[k+1]) has no chord; fall back to the incoming segment.
      tangents_[k] = chord.norm() > TangentSegment::kMinLength
                       ? Vec2(chord.normalized())
                       : Vec2((points_[k] - points_[k - 1]).normalized());
    }
  } else {
    if (tangents.size() != n) {
      throw std::invalid_argument(
        "tangent count " + std::to_string(tangents.size()) + " does not match point count " +
        std::to_string(n));
    }
    tangents_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      tangents_.push_back(normalized_or_throw(tangents[k], "supplied"));
    }
  }

  segments_.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    segments_.emplace_back(points_[k], points_[k + 1], tangents_[k], tangents_[k + 1]);
  }
}

SegmentDistance segment_pseudo_distance(const Vec2 & p, const TangentSegment & seg)
{
  const Vec2 a = p - seg.p1();
  const Vec2 d = seg.p2() - seg.p1();
  const Vec2 e = seg.t2() - seg.t1();

  // (a - lambda d) . (t1 + lambda e) = 0
  //   => c0 + c1 lambda + c2 lambda^2 = 0
  const double c0 = a.dot(seg.t1());
  const double c1 = a.dot(e) - d.dot(seg.t1());
  const double c2 = -d.dot(e);

  std::array<double, 2> roots{};
  int n_roots = 0;
  if (std::abs(c2) < kLinearThreshold) {
    if (c1 != 0.0) {
      roots[n_roots++] = -c0 / c1;
    }
  } else {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (c1 + std::copysign(sq, c1));
      roots[n_roots++] = q / c2;
      if (q != 0.0) {
        roots[n_roots++] = c0 / q;
      }
    }
  }

  SegmentDistance best{std::numeric_limits<double>::infinity(), 0.0, true};
  for (int i = 0; i < n_roots; ++i) {
    double lambda = roots[i];
    if (!std::isfinite(lambda) || lambda < -kRootSlack || lambda > 1.0 + kRootSlack) {
      continue;
    }
    lambda = std::clamp(lambda, 0.0, 1.0);
    const double m = (a - lambda * d).norm();
    if (m < best.magnitude) {
      best = {m, lambda, true};
    }
  }
  if (std::isfinite(best.magnitude)) {
    return best;
  }

  const double m0 = a.norm();
  const double m1 = (p - seg.p2()).norm();
  return m0 <= m1 ? SegmentDistance{m0, 0.0} : SegmentDistance{m1, 1.0};
}

SignedDistance signed_pseudo_distance(const Vec2 & p, const PolylineBoundary & boundary)
{
  if (boundary.empty()) {
    throw EmptyBoundary("pseudo-distance queried on an empty boundary");
  }
  const auto & segments = boundary.segments();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  double best_lambda = 0.0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    // The pseudo-distance foot lies on the segment, so the bounding box
    // distance is a lower bound.
    if (bbox_distance(p, segments[j]) > best) {
      continue;
    }
    const SegmentDistance sd = segment_pseudo_distance(p, segments[j]);
    if (sd.magnitude < best) {
      best = sd.magnitude;
      best_index = j;
      best_lambda = sd.lambda;
    }
  }

  const TangentSegment & seg = segments[best_index];
  const Vec2 foot = best_lambda * seg.p2() + (1.0 - best_lambda) * seg.p1();
  const Vec2 tangent = best_lambda * seg.t2() + (1.0 - best_lambda) * seg.t1();
  const double side = cross2(tangent, p - foot);
  const bool on_left = side > 0.0;
  const bool inside =
    (boundary.interior_side() == InteriorSide::kLeftOfTravel) ? on_left : !on_left;
  const double value = best == 0.0 ? 0.0 : (inside ? best : -best);
  return {value, best_index, best_lambda};
}

Vec2 distance_gradient(const Vec2 & p, const PolylineBoundary & boundary, double step)
{
  if (!(step > 0.0)) {
    throw std::invalid_argument("gradient step must be positive");
  }
  Vec2 g;
  for (int k = 0; k < 2; ++k) {
    Vec2 dp = Vec2::Zero();
    dp[k] = step;
    g[k] = (signed_value(p + dp, boundary) - signed_value(p - dp, boundary)) / (2.0 * step);
  }
  return g;
}

Mat2 distance_hessian(const Vec2 & p, const PolylineBoundary & boundary, double step)
{
  if (!(step > 0.0)) {
    throw std::invalid_argument("hessian step must be positive");
  }
  const double h2 = step * step;
  const Vec2 ex(step, 0.0);
  const Vec2 ey(0.0, step);
  const double f0 = signed_value(p, boundary);

  Mat2 H;
  H(0, 0) = (signed_value(p + ex, boundary) - 2.0 * f0 + signed_value(p - ex, boundary)) / h2;
  H(1, 1) = (signed_value(p + ey, boundary) - 2.0 * f0 + signed_value(p - ey, boundary)) / h2;
  const double hxy =
    (signed_value(p + ex + ey, boundary) - signed_value(p + ex - ey, boundary) -
     signed_value(p - ex + ey, boundary) + signed_value(p - ex - ey, boundary)) /
    (4.0 * h2);
  H(0, 1) = hxy;
  H(1, 0) = hxy;
  return 0.5 * (H + H.transpose());
}

DistanceEvaluation polyline_pseudo_distance(
  const Vec2 & p, const PolylineBoundary & boundary, const DifferentiationSteps & steps)
{
  const SignedDistance sd = signed_pseudo_distance(p, boundary);
  DistanceEvaluation out;
  out.value = sd.value;
  out.segment_index = sd.segment_index;
  out.lambda = sd.lambda;
  out.gradient = distance_gradient(p, boundary, steps.gradient);
  out.hessian = distance_hessian(p, boundary, steps.hessian);
  return out;
}

PolylineProjection project_onto_polyline(const Vec2 & p, const std::vector<Vec2> & polyline)
{
  if (polyline.empty()) {
    throw EmptyBoundary("projection onto an empty polyline");
  }
  PolylineProjection best;
  best.point = polyline.front();
  best.distance = (p - polyline.front()).norm();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
    const Vec2 d = polyline[k + 1] - polyline[k];
    const double len2 = d.squaredNorm();
    const double len = std::sqrt(len2);
    const double t = len2 > 0.0 ? std::clamp((p - polyline[k]).dot(d) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = polyline[k] + t * d;
    const double dist = (p - q).norm();
    if (dist < best.distance) {
      best = {q, s + t * len, dist, k};
    }
    s += len;
  }
  return best;
}

double euclidean_distance(const Vec2 & p, const std::vector<Vec2> & polyline)
{
  return project_onto_polyline(p, polyline).distance;
}

double polyline_length(const std::vector<Vec2> & polyline)
{
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
    s += (polyline[k + 1] - polyline[k]).norm();
  }
  return s;
}

Vec2 point_at_arc_length(const std::vector<Vec2> & polyline, double s)
{
  if (polyline.empty()) {
    throw EmptyBoundary("arc length query on an empty polyline");
  }
  if (s <= 0.0) {
    return polyline.front();
  }
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
    const double len = (polyline[k + 1] - polyline[k]).norm();
    if (s <= len) {
      return polyline[k] + (s / len) * (polyline[k + 1] - polyline[k]);
    }
    s -= len;
  }
  return polyline.back();
}

Vec2 direction_at_arc_length(const std::vector<Vec2> & polyline, double s)
{
  if (polyline.size() < 2) {
    throw EmptyBoundary("direction query needs at least two points");
  }
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
    const double len = (polyline[k + 1] - polyline[k]).norm();
    if (s <= len || k + 2 == polyline.size()) {
      return (polyline[k + 1] - polyline[k]).normalized();
    }
    s -= len;
  }
  return (polyline.back() - polyline[polyline.size() - 2]).normalized();
}

}  // namespace polycbf
