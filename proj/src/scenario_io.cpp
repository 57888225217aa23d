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

#include "polycbf/scenario_io.hpp"

#include "polycbf/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace polycbf
{

namespace
{

using nlohmann::json;
using nlohmann::ordered_json;

std::string interior_name(InteriorSide side)
{
  return side == InteriorSide::kLeftOfTravel ? "left_of_travel" : "right_of_travel";
}

InteriorSide parse_interior(const std::string & s, const std::string & where)
{
  if (s == "left_of_travel") {
    return InteriorSide::kLeftOfTravel;
  }
  if (s == "right_of_travel") {
    return InteriorSide::kRightOfTravel;
  }
  throw ValidationError(where + ".interior_side must be left_of_travel or right_of_travel");
}

ordered_json points_json(const std::vector<Vec2> & pts)
{
  ordered_json arr = ordered_json::array();
  for (const auto & p : pts) {
    arr.push_back({p.x(), p.y()});
  }
  return arr;
}

std::vector<Vec2> parse_points(const json & arr, const std::string & where)
{
  if (!arr.is_array()) {
    throw ParseError(where + " must be an array of [x, y] pairs");
  }
  std::vector<Vec2> pts;
  pts.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json & p = arr[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError(where + "[" + std::to_string(i) + "] must be a numeric [x, y] pair");
    }
    const Vec2 v(p[0].get<double>(), p[1].get<double>());
    if (!v.allFinite()) {
      throw ValidationError(where + "[" + std::to_string(i) + "] is not finite");
    }
    pts.push_back(v);
  }
  return pts;
}

void check_distinct(const std::vector<Vec2> & pts, const std::string & where)
{
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!((pts[i + 1] - pts[i]).norm() > TangentSegment::kMinLength)) {
      throw ValidationError(
        where + ": consecutive points " + std::to_string(i) + " and " + std::to_string(i + 1) +
        " coincide");
    }
  }
}

template <typename T>
T get_or(const json & obj, const char * key, T fallback, const std::string & where)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception & e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

std::pair<double, double> get_range(
  const json & obj, const char * key, std::pair<double, double> fallback, const std::string & where)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  const json & r = obj.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    throw ParseError(where + "." + key + " must be a numeric [min, max] pair");
  }
  return {r[0].get<double>(), r[1].get<double>()};
}

const json & section(const json & doc, const char * key)
{
  static const json kEmpty = json::object();
  if (!doc.contains(key)) {
    return kEmpty;
  }
  if (!doc.at(key).is_object()) {
    throw ParseError(std::string(key) + " must be an object");
  }
  return doc.at(key);
}

PolylineBoundary parse_boundary(const json & doc, const std::string & name)
{
  const std::string where = "boundaries." + name;
  if (!doc.is_object()) {
    throw ParseError(where + " must be an object");
  }
  if (!doc.contains("points_m")) {
    throw ParseError(where + ".points_m is required");
  }
  std::vector<Vec2> pts = parse_points(doc.at("points_m"), where + ".points_m");
  if (pts.size() < 2) {
    throw ValidationError(where + " needs at least two points");
  }
  check_distinct(pts, where + ".points_m");
  const InteriorSide default_side =
    name == "left" ? InteriorSide::kRightOfTravel : InteriorSide::kLeftOfTravel;
  const InteriorSide side = doc.contains("interior_side")
                              ? parse_interior(get_or<std::string>(doc, "interior_side", "", where), where)
                              : default_side;
  std::vector<Vec2> tangents;
  if (doc.contains("tangents")) {
    tangents = parse_points(doc.at("tangents"), where + ".tangents");
    if (tangents.size() != pts.size()) {
      throw ValidationError(
        where + ".tangents has " + std::to_string(tangents.size()) + " entries for " +
        std::to_string(pts.size()) + " points");
    }
    for (std::size_t i = 0; i < tangents.size(); ++i) {
      if (!(tangents[i].norm() > 0.0)) {
        throw ValidationError(where + ".tangents[" + std::to_string(i) + "] is zero");
      }
    }
  }
  try {
    return PolylineBoundary(std::move(pts), side, std::move(tangents));
  } catch (const Error & e) {
    throw ValidationError(where + ": " + e.what());
  }
}

ordered_json boundary_json(const PolylineBoundary & b)
{
  ordered_json out;
  out["interior_side"] = interior_name(b.interior_side());
  out["points_m"] = points_json(b.points());
  out["tangents"] = points_json(b.tangents());
  return out;
}

PlannerKind parse_planner_kind(const std::string & s)
{
  if (s == "pure_pursuit") {
    return PlannerKind::kPurePursuit;
  }
  if (s == "adversarial") {
    return PlannerKind::kAdversarial;
  }
  throw ValidationError("planner.kind must be pure_pursuit or adversarial, got '" + s + "'");
}

BoundarySide parse_side(const std::string & s)
{
  if (s == "left") {
    return BoundarySide::kLeft;
  }
  if (s == "right") {
    return BoundarySide::kRight;
  }
  throw ValidationError("planner.target must be left or right, got '" + s + "'");
}

}  // namespace

ordered_json to_json(const ScenarioFile & file)
{
  ordered_json doc;
  doc["schema_version"] = file.schema_version;
  doc["name"] = file.name;
  doc["boundaries"]["left"] = boundary_json(file.scenario.left);
  doc["boundaries"]["right"] = boundary_json(file.scenario.right);
  ordered_json paths = ordered_json::array();
  for (const auto & p : file.scenario.reference_paths) {
    paths.push_back(points_json(p));
  }
  doc["reference_paths_m"] = std::move(paths);

  const VehicleParams & v = file.vehicle;
  doc["vehicle"] = {
    {"length_m", v.length},
    {"width_m", v.width},
    {"wheelbase_m", v.wheelbase},
    {"rear_wheelbase_m", v.rear_wheelbase},
    {"n_circles", v.n_circles}};

  const FilterParams & f = file.filter;
  doc["filter"] = {
    {"dt_s", f.dt},
    {"alpha1", f.alpha1},
    {"gamma_term_m", f.gamma_term},
    {"accel_bounds_mps2", {f.u_min.accel, f.u_max.accel}},
    {"steer_rate_bounds_radps", {f.u_min.steer_rate, f.u_max.steer_rate}},
    {"weights", {f.weights.x(), f.weights.y()}},
    {"gradient_step_m", f.steps.gradient},
    {"hessian_step_m", f.steps.hessian}};

  const PlannerConfig & p = file.planner;
  doc["planner"] = {
    {"kind", std::string(to_string(p.kind))},
    {"lookahead_m", p.lookahead},
    {"speed_ref_mps", p.speed_ref},
    {"speed_gain", p.speed_gain},
    {"steer_gain", p.steer_gain},
    {"max_steering_rad", p.max_steering},
    {"steer_noise_radps", p.steer_noise},
    {"heading_gain", p.heading_gain},
    {"target", std::string(to_string(p.target))}};

  const SpawnRules & s = file.scenario.spawn;
  doc["spawn"] = {
    {"seed", s.seed},
    {"speed_range_mps", {s.speed_min, s.speed_max}},
    {"h_margin_m", s.h_margin}};
  doc["duration_steps"] = file.scenario.duration_steps;
  return doc;
}

ScenarioFile scenario_from_json(const json & doc)
{
  if (!doc.is_object()) {
    throw ParseError("scenario document must be a JSON object");
  }
  ScenarioFile file;
  file.schema_version = get_or<int>(doc, "schema_version", -1, "");
  if (file.schema_version != kScenarioSchemaVersion) {
    throw ValidationError(
      "unsupported schema_version " + std::to_string(file.schema_version) + " (expected " +
      std::to_string(kScenarioSchemaVersion) + ")");
  }
  file.name = get_or<std::string>(doc, "name", "", "");

  const json & bounds = section(doc, "boundaries");
  if (!bounds.contains("left") || !bounds.contains("right")) {
    throw ParseError("boundaries.left and boundaries.right are required");
  }
  file.scenario.left = parse_boundary(bounds.at("left"), "left");
  file.scenario.right = parse_boundary(bounds.at("right"), "right");

  if (!doc.contains("reference_paths_m") || !doc.at("reference_paths_m").is_array()) {
    throw ParseError("reference_paths_m must be an array of polylines");
  }
  const json & paths = doc.at("reference_paths_m");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string where = "reference_paths_m[" + std::to_string(i) + "]";
    Path path = parse_points(paths[i], where);
    if (path.size() < 2) {
      throw ValidationError(where + " needs at least two points");
    }
    check_distinct(path, where);
    file.scenario.reference_paths.push_back(std::move(path));
  }
  if (file.scenario.reference_paths.empty()) {
    throw ValidationError("at least one reference path is required");
  }

  const json & v = section(doc, "vehicle");
  VehicleParams & veh = file.vehicle;
  veh.length = get_or(v, "length_m", veh.length, "vehicle");
  veh.width = get_or(v, "width_m", veh.width, "vehicle");
  veh.wheelbase = get_or(v, "wheelbase_m", veh.wheelbase, "vehicle");
  veh.rear_wheelbase = get_or(v, "rear_wheelbase_m", veh.rear_wheelbase, "vehicle");
  veh.n_circles = get_or(v, "n_circles", veh.n_circles, "vehicle");

  const json & f = section(doc, "filter");
  FilterParams & flt = file.filter;
  flt.dt = get_or(f, "dt_s", flt.dt, "filter");
  flt.alpha1 = get_or(f, "alpha1", flt.alpha1, "filter");
  flt.gamma_term = get_or(f, "gamma_term_m", flt.gamma_term, "filter");
  const auto accel = get_range(f, "accel_bounds_mps2", {flt.u_min.accel, flt.u_max.accel}, "filter");
  const auto steer = get_range(
    f, "steer_rate_bounds_radps", {flt.u_min.steer_rate, flt.u_max.steer_rate}, "filter");
  flt.u_min = {accel.first, steer.first};
  flt.u_max = {accel.second, steer.second};
  const auto w = get_range(f, "weights", {flt.weights.x(), flt.weights.y()}, "filter");
  flt.weights = Vec2(w.first, w.second);
  flt.steps.gradient = get_or(f, "gradient_step_m", flt.steps.gradient, "filter");
  flt.steps.hessian = get_or(f, "hessian_step_m", flt.steps.hessian, "filter");

  const json & p = section(doc, "planner");
  PlannerConfig & pl = file.planner;
  pl.kind = parse_planner_kind(get_or<std::string>(p, "kind", "pure_pursuit", "planner"));
  pl.lookahead = get_or(p, "lookahead_m", pl.lookahead, "planner");
  pl.speed_ref = get_or(p, "speed_ref_mps", pl.speed_ref, "planner");
  pl.speed_gain = get_or(p, "speed_gain", pl.speed_gain, "planner");
  pl.steer_gain = get_or(p, "steer_gain", pl.steer_gain, "planner");
  pl.max_steering = get_or(p, "max_steering_rad", pl.max_steering, "planner");
  pl.steer_noise = get_or(p, "steer_noise_radps", pl.steer_noise, "planner");
  pl.heading_gain = get_or(p, "heading_gain", pl.heading_gain, "planner");
  pl.target = parse_side(get_or<std::string>(p, "target", "left", "planner"));

  const json & s = section(doc, "spawn");
  SpawnRules & sp = file.scenario.spawn;
  sp.seed = get_or<std::uint64_t>(s, "seed", sp.seed, "spawn");
  const auto speeds = get_range(s, "speed_range_mps", {sp.speed_min, sp.speed_max}, "spawn");
  sp.speed_min = speeds.first;
  sp.speed_max = speeds.second;
  sp.h_margin = get_or(s, "h_margin_m", sp.h_margin, "spawn");
  file.scenario.duration_steps = get_or(doc, "duration_steps", file.scenario.duration_steps, "");

  validate_scenario(file);
  return file;
}

void validate_scenario(const ScenarioFile & file)
{
  try {
    file.vehicle.validate();
    file.filter.validate();
  } catch (const ConfigError & e) {
    throw ValidationError(e.what());
  }
  const SpawnRules & sp = file.scenario.spawn;
  if (!(sp.speed_min <= sp.speed_max)) {
    throw ValidationError("spawn.speed_range_mps must satisfy min <= max");
  }
  if (file.scenario.duration_steps < 0) {
    throw ValidationError("duration_steps must be non-negative");
  }
  if (!(file.planner.lookahead > 0.0) || !(file.planner.max_steering > 0.0) ||
      !(file.planner.max_steering < kMaxSteering) || !(file.planner.steer_noise >= 0.0)) {
    throw ValidationError("planner parameters out of range");
  }
  if (file.scenario.left.empty() || file.scenario.right.empty()) {
    throw ValidationError("both boundaries are required");
  }

  const double radius = file.vehicle.circle_radius();
  for (std::size_t i = 0; i < file.scenario.reference_paths.size(); ++i) {
    const Path & path = file.scenario.reference_paths[i];
    for (std::size_t k = 0; k < path.size(); ++k) {
      const double dl = signed_pseudo_distance(path[k], file.scenario.left).value;
      const double dr = signed_pseudo_distance(path[k], file.scenario.right).value;
      if (!(dl > radius) || !(dr > radius)) {
        std::ostringstream msg;
        msg << "reference_paths_m[" << i << "][" << k << "] clearance "
            << std::min(dl, dr) << " m does not exceed circle radius " << radius << " m";
        throw ValidationError(msg.str());
      }
    }
  }
}

ScenarioFile load_scenario(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open scenario file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error & e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const std::filesystem::path & path, const ScenarioFile & file)
{
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write scenario file " + path.string());
  }
  out << to_json(file).dump(2) << '\n';
}

}  // namespace polycbf
