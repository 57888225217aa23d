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

#ifndef POLYCBF__SCENARIO_IO_HPP_
#define POLYCBF__SCENARIO_IO_HPP_

#include "polycbf/cbf_constraints.hpp"
#include "polycbf/simulation.hpp"
#include "polycbf/vehicle_model.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace polycbf
{

inline constexpr int kScenarioSchemaVersion = 1;

/// Everything needed to reproduce a run: road, vehicle, filter, planner, spawn.
struct ScenarioFile
{
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  Scenario scenario;
  VehicleParams vehicle;
  FilterParams filter;
  PlannerConfig planner;
};

/// Normalized form: every field present, tangents explicit, stable key order.
nlohmann::ordered_json to_json(const ScenarioFile & file);

/// Applies defaults and validates. Throws ParseError for malformed documents
/// and ValidationError for invariant breaches.
ScenarioFile scenario_from_json(const nlohmann::json & doc);

ScenarioFile load_scenario(const std::filesystem::path & path);
void save_scenario(const std::filesystem::path & path, const ScenarioFile & file);

/// Reference-path clearance and parameter checks on an assembled scenario.
void validate_scenario(const ScenarioFile & file);

}  // namespace polycbf

#endif  // POLYCBF__SCENARIO_IO_HPP_
