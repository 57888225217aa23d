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

#include "polycbf/map_generator.hpp"

#include "polycbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace polycbf
{

namespace
{

constexpr double kPi = std::numbers::pi;

// Piece of a centerline with curvature ramping linearly from k0 to k1.
struct Piece
{
  double length;
  double k0;
  double k1;
};

class CurvatureProfile
{
public:
  void straight(double length) { pieces_.push_back({length, 0.0, 0.0}); }

  // Turn by `angle` (signed, left positive) on `radius` with clothoid
  // transitions of length `ramp` on both sides.
  void turn(double angle, double radius, double ramp)
  {
    const double k = std::copysign(1.0 / radius, angle);
    // Each transition turns by k * ramp / 2.
    const double arc = std::abs(angle) - std::abs(k) * ramp;
    pieces_.push_back({ramp, 0.0, k});
    pieces_.push_back({std::max(arc, 0.0) * radius, k, k});
    pieces_.push_back({ramp, k, 0.0});
  }

  double length() const
  {
    double s = 0.0;
    for (const auto & p : pieces_) {
      s += p.length;
    }
    return s;
  }

  double operator()(double s) const
  {
    for (const auto & p : pieces_) {
      if (s <= p.length) {
        return p.length > 0.0 ? p.k0 + (p.k1 - p.k0) * (s / p.length) : p.k0;
      }
      s -= p.length;
    }
    return pieces_.empty() ? 0.0 : pieces_.back().k1;
  }

private:
  std::vector<Piece> pieces_;
};

struct Centerline
{
  std::vector<Vec2> points;
  std::vector<double> headings;
  std::vector<double> arc;
};

Centerline integrate(const std::function<double(double)> & kappa, double length, double spacing)
{
  constexpr int kSub = 20;
  const int n = std::max(2, static_cast<int>(std::ceil(length / spacing)) + 1);
  const double ds = length / (n - 1);
  Centerline c;
  Vec2 p = Vec2::Zero();
  double theta = 0.0;
  double s = 0.0;
  c.points.push_back(p);
  c.headings.push_back(theta);
  c.arc.push_back(s);
  for (int i = 1; i < n; ++i) {
    const double h = ds / kSub;
    for (int k = 0; k < kSub; ++k) {
      const double mid = theta + 0.5 * h * kappa(s + 0.5 * h);
      p += h * Vec2(std::cos(mid), std::sin(mid));
      theta += h * kappa(s + 0.5 * h);
      s += h;
    }
    c.points.push_back(p);
    c.headings.push_back(theta);
    c.arc.push_back(s);
  }
  return c;
}

// Smooth 0 -> 1 -> 0 window over [a, b] with cosine ramps of width `ramp`.
double window(double s, double a, double b, double ramp)
{
  if (s <= a || s >= b) {
    return 0.0;
  }
  if (s < a + ramp) {
    return 0.5 - 0.5 * std::cos(kPi * (s - a) / ramp);
  }
  if (s > b - ramp) {
    return 0.5 - 0.5 * std::cos(kPi * (b - s) / ramp);
  }
  return 1.0;
}

ScenarioFile assemble(
  const Centerline & c, const MapParams & params, const std::function<double(double)> & widen_right)
{
  const double half_width = 0.5 * params.lanes * params.lane_width;
  std::vector<Vec2> left, right;
  std::vector<Path> lanes(params.lanes);
  const double total = c.arc.back();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const Vec2 normal(-std::sin(c.headings[i]), std::cos(c.headings[i]));
    left.push_back(c.points[i] + half_width * normal);
    right.push_back(c.points[i] - (half_width + widen_right(c.arc[i])) * normal);
    if (c.arc[i] < params.path_trim || c.arc[i] > total - params.path_trim) {
      continue;
    }
    for (int lane = 0; lane < params.lanes; ++lane) {
      const double offset = half_width - params.lane_width * (lane + 0.5);
      lanes[lane].push_back(c.points[i] + offset * normal);
    }
  }
  ScenarioFile file;
  file.scenario.left = PolylineBoundary(std::move(left), InteriorSide::kRightOfTravel);
  file.scenario.right = PolylineBoundary(std::move(right), InteriorSide::kLeftOfTravel);
  file.scenario.reference_paths = std::move(lanes);
  return file;
}

}  // namespace

std::string_view to_string(MapKind kind)
{
  switch (kind) {
    case MapKind::kLoop:
      return "loop";
    case MapKind::kInterchange:
      return "interchange";
    case MapKind::kIntersection:
      return "intersection";
    case MapKind::kSCurve:
      return "scurve";
  }
  return "unknown";
}

MapKind parse_map_kind(const std::string & name)
{
  for (MapKind k : {MapKind::kLoop, MapKind::kInterchange, MapKind::kIntersection, MapKind::kSCurve}) {
    if (name == to_string(k)) {
      return k;
    }
  }
  throw ConfigError("unknown map kind '" + name + "' (loop, interchange, intersection, scurve)");
}

ScenarioFile generate_map(MapKind kind, std::uint64_t seed, const MapParams & params)
{
  if (!(params.lane_width > 0.0) || params.lanes < 1 || !(params.spacing > 0.0)) {
    throw ConfigError("map parameters must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);

  CurvatureProfile profile;
  std::function<double(double)> widen = [](double) { return 0.0; };
  std::function<double(double)> kappa;
  double length = 0.0;

  switch (kind) {
    case MapKind::kLoop: {
      const double r = 0.6 * jitter(rng);
      const double a = 1.2 * jitter(rng);
      const double b = 0.8 * jitter(rng);
      profile.straight(a);
      profile.turn(kPi / 2, r, 0.2);
      profile.straight(b);
      profile.turn(kPi / 2, r, 0.2);
      profile.straight(a);
      profile.turn(kPi / 2, r, 0.2);
      profile.straight(b);
      // Merge lane: the right boundary opens up along the first straight.
      const double merge_start = 0.35;
      const double merge_end = a - 0.05;
      widen = [=](double s) { return 0.12 * window(s, merge_start, merge_end, 0.2); };
      break;
    }
    case MapKind::kInterchange: {
      profile.straight(0.8 * jitter(rng));
      profile.turn(-2.0 * kPi / 3.0, 0.8 * jitter(rng), 0.25);
      profile.straight(0.4 * jitter(rng));
      profile.turn(5.0 * kPi / 6.0, 0.7 * jitter(rng), 0.25);
      profile.straight(0.8 * jitter(rng));
      break;
    }
    case MapKind::kIntersection: {
      const double sign = (seed % 2 == 0) ? 1.0 : -1.0;
      profile.straight(1.2 * jitter(rng));
      profile.turn(sign * kPi / 2, 0.45 * jitter(rng), 0.1);
      profile.straight(1.2 * jitter(rng));
      break;
    }
    case MapKind::kSCurve: {
      const double wavelength = 2.0 * jitter(rng);
      const double peak = params.curvature * (0.85 + 0.15 * (jitter(rng) - 0.9) / 0.2);
      length = 2.0 * wavelength;
      kappa = [=](double s) { return peak * std::sin(2.0 * kPi * s / wavelength); };
      break;
    }
  }
  if (!kappa) {
    length = profile.length();
    kappa = [profile](double s) { return profile(s); };
  }

  ScenarioFile file = assemble(integrate(kappa, length, params.spacing), params, widen);
  file.name = std::string(to_string(kind)) + "-seed" + std::to_string(seed);
  file.scenario.spawn.seed = seed;
  file.filter.gamma_term = params.gamma_term;
  validate_scenario(file);
  return file;
}

}  // namespace polycbf
