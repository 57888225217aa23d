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

#ifndef POLYCBF__TRACE_HPP_
#define POLYCBF__TRACE_HPP_

#include "polycbf/simulation.hpp"

#include "json.hpp"

#include <ostream>
#include <vector>

namespace polycbf
{

/// One trace line. Field order is fixed:
///   step, x, y, heading, speed, steering,
///   u_nom_accel, u_nom_steer_rate, u_accel, u_steer_rate,
///   was_active, infeasible, min_h, collided, reset,
///   distance_time_s, solve_time_s, rows[{circle, side, h, h_dot, a, b}]
nlohmann::ordered_json step_record_json(const StepRecord & record);

/// Newline-delimited JSON, one record per line.
void write_trace(std::ostream & out, const std::vector<StepRecord> & records);

nlohmann::ordered_json summary_json(const RunSummary & summary);

}  // namespace polycbf

#endif  // POLYCBF__TRACE_HPP_
