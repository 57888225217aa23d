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

#include "polycbf/trace.hpp"

#include <string>

namespace polycbf
{

using nlohmann::ordered_json;

ordered_json step_record_json(const StepRecord & r)
{
  ordered_json j;
  j["step"] = r.step;
  j["x"] = r.state.x;
  j["y"] = r.state.y;
  j["heading"] = r.state.heading;
  j["speed"] = r.state.speed;
  j["steering"] = r.state.steering;
  j["u_nom_accel"] = r.u_nom.accel;
  j["u_nom_steer_rate"] = r.u_nom.steer_rate;
  j["u_accel"] = r.outcome.u_certified.accel;
  j["u_steer_rate"] = r.outcome.u_certified.steer_rate;
  j["was_active"] = r.outcome.was_active;
  j["infeasible"] = r.outcome.infeasible;
  j["min_h"] = r.min_h;
  j["collided"] = r.collided;
  j["reset"] = r.reset;
  j["distance_time_s"] = r.outcome.distance_time;
  j["solve_time_s"] = r.outcome.solve_time;
  ordered_json rows = ordered_json::array();
  for (const auto & row : r.outcome.rows) {
    ordered_json jr;
    jr["circle"] = row.circle_index;
    jr["side"] = std::string(to_string(row.side));
    jr["h"] = row.h;
    jr["h_dot"] = row.h_dot;
    jr["a"] = {row.a.x(), row.a.y()};
    jr["b"] = row.b;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_trace(std::ostream & out, const std::vector<StepRecord> & records)
{
  for (const auto & r : records) {
    out << step_record_json(r).dump() << '\n';
  }
}

namespace
{

ordered_json percentile_json(const Percentiles & p)
{
  ordered_json j;
  j["p50"] = p.p50;
  j["p95"] = p.p95;
  j["max"] = p.max;
  return j;
}

}  // namespace

ordered_json summary_json(const RunSummary & s)
{
  ordered_json j;
  j["steps"] = s.steps;
  j["collisions"] = s.collisions;
  j["resets"] = s.resets;
  j["active_steps"] = s.active_steps;
  j["infeasible_steps"] = s.infeasible_steps;
  j["activity_rate"] = s.activity_rate;
  j["min_h"] = s.min_h;
  j["distance_time_s"] = percentile_json(s.distance_time);
  j["solve_time_s"] = percentile_json(s.solve_time);
  j["total_time_s"] = percentile_json(s.total_time);
  return j;
}

}  // namespace polycbf
