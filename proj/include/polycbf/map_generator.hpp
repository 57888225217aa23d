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

#ifndef POLYCBF__MAP_GENERATOR_HPP_
#define POLYCBF__MAP_GENERATOR_HPP_

#include "polycbf/scenario_io.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace polycbf
{

enum class MapKind { kLoop, kInterchange, kIntersection, kSCurve };

std::string_view to_string(MapKind kind);
/// Throws ConfigError for unknown names.
MapKind parse_map_kind(const std::string & name);

struct MapParams
{
  double lane_width = 0.15;  // m
  int lanes = 2;
  double spacing = 0.01;     // m, boundary point spacing
  /// Peak centerline curvature of the scurve map [1/m]; 0 gives a straight road.
  double curvature = 2.5;
  /// Reference paths stop this far short of both boundary ends [m].
  double path_trim = 0.3;
  /// Filter gamma * dt^3 written into the generated file [m]; covers the
  /// third-order remainder of the one-step Taylor condition.
  double gamma_term = 5e-4;
};

/// Procedural two-boundary road with one reference path per lane center.
///  - loop: three left-hand quarter turns with a widened merge section
///  - interchange: reverse-curve ramp (right then left)
///  - intersection: 90 degree urban turn, direction picked by seed
///  - scurve: sinusoidal curvature profile
ScenarioFile generate_map(MapKind kind, std::uint64_t seed, const MapParams & params = {});

}  // namespace polycbf

#endif  // POLYCBF__MAP_GENERATOR_HPP_
