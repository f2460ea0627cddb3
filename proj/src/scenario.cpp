// SPDX-License-Identifier: Apache-2.0
//
// nearfield: radiating near-field beam focusing simulator
// Copyright (C) 2026 The nearfield authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nearfield/experiments.hpp"

namespace nearfield {

using json = nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_object(const json& value, const std::string& path) {
  if (!value.is_object()) {
    throw ScenarioError(path.empty() ? "<root>" : path, "expected an object");
  }
}

void check_keys(const json& object, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      throw ScenarioError(join(path, item.key()), "unknown key");
    }
  }
}

const json& required(const json& object, const std::string& path, const std::string& key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ScenarioError(join(path, key), "missing required key");
  }
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) {
    throw ScenarioError(path, "expected a number");
  }
  const double x = value.get<double>();
  if (!std::isfinite(x)) {
    throw ScenarioError(path, "must be finite");
  }
  return x;
}

double positive(const json& value, const std::string& path) {
  const double x = as_number(value, path);
  if (!(x > 0.0)) {
    throw ScenarioError(path, "out of range: must be > 0");
  }
  return x;
}

double non_negative(const json& value, const std::string& path) {
  const double x = as_number(value, path);
  if (!(x >= 0.0)) {
    throw ScenarioError(path, "out of range: must be >= 0");
  }
  return x;
}

int as_int(const json& value, const std::string& path, int minimum) {
  if (!value.is_number_integer()) {
    throw ScenarioError(path, "expected an integer");
  }
  const auto x = value.get<long long>();
  if (x < minimum || x > 100000000) {
    throw ScenarioError(path, "out of range: must be >= " + std::to_string(minimum));
  }
  return static_cast<int>(x);
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) {
    throw ScenarioError(path, "expected a string");
  }
  return value.get<std::string>();
}

Point as_point(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) {
    throw ScenarioError(path, "expected [x, y, z] in meters");
  }
  Point p{};
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = as_number(value[i], path + "[" + std::to_string(i) + "]");
  }
  return p;
}

std::array<double, 2> as_range(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) {
    throw ScenarioError(path, "expected [min, max]");
  }
  const std::array<double, 2> r{as_number(value[0], path + "[0]"), as_number(value[1], path + "[1]")};
  if (!(r[0] < r[1])) {
    throw ScenarioError(path, "out of range: min must be < max");
  }
  return r;
}

Plane parse_plane(const std::string& text, const std::string& path) {
  if (text == "xy") return Plane::xy;
  if (text == "xz") return Plane::xz;
  if (text == "yz") return Plane::yz;
  throw ScenarioError(path, "expected one of xy, xz, yz");
}

int parse_axis(const std::string& text, const std::string& path) {
  if (text == "x") return 0;
  if (text == "y") return 1;
  if (text == "z") return 2;
  throw ScenarioError(path, "expected one of x, y, z");
}

const char* axis_name(int axis) {
  static constexpr const char* names[] = {"x", "y", "z"};
  return names[axis];
}

Design parse_design(const std::string& text, const std::string& path) {
  if (text == "focus") return Design::focus;
  if (text == "steer") return Design::steer;
  if (text == "sumrate") return Design::sumrate;
  throw ScenarioError(path, "expected one of focus, steer, sumrate");
}

ArraySpec parse_array(const json& node) {
  const std::string path = "array";
  check_object(node, path);
  check_keys(node, path, {"length_m", "width_m", "spacing_wavelengths", "center_m"});
  ArraySpec spec;
  spec.length_m = non_negative(required(node, path, "length_m"), "array.length_m");
  spec.width_m = non_negative(required(node, path, "width_m"), "array.width_m");
  spec.spacing_wavelengths = positive(required(node, path, "spacing_wavelengths"), "array.spacing_wavelengths");
  if (node.contains("center_m")) {
    spec.center_m = as_point(node["center_m"], "array.center_m");
  }
  return spec;
}

LinkSpec parse_link(const json& node) {
  const std::string path = "link";
  check_object(node, path);
  check_keys(node, path, {"power_dbm", "transmit_power_w", "noise_psd_dbm_hz", "noise_psd_w_hz", "bandwidth_hz"});
  LinkSpec link;
  const bool has_dbm = node.contains("power_dbm");
  const bool has_w = node.contains("transmit_power_w");
  if (has_dbm == has_w) {
    throw ScenarioError("link.power_dbm", has_dbm ? "give either power_dbm or transmit_power_w, not both"
                                                  : "missing required key (or link.transmit_power_w)");
  }
  if (has_dbm) {
    link.power_dbm = as_number(node["power_dbm"], "link.power_dbm");
  } else {
    link.transmit_power_w = positive(node["transmit_power_w"], "link.transmit_power_w");
  }
  const bool psd_dbm = node.contains("noise_psd_dbm_hz");
  const bool psd_w = node.contains("noise_psd_w_hz");
  if (psd_dbm == psd_w) {
    throw ScenarioError("link.noise_psd_dbm_hz", psd_dbm
                                                     ? "give either noise_psd_dbm_hz or noise_psd_w_hz, not both"
                                                     : "missing required key (or link.noise_psd_w_hz)");
  }
  if (psd_dbm) {
    link.noise_psd_dbm_hz = as_number(node["noise_psd_dbm_hz"], "link.noise_psd_dbm_hz");
  } else {
    link.noise_psd_w_hz = positive(node["noise_psd_w_hz"], "link.noise_psd_w_hz");
  }
  link.bandwidth_hz = positive(required(node, path, "bandwidth_hz"), "link.bandwidth_hz");
  return link;
}

SweepSpec parse_sweep(const json& node) {
  const std::string path = "sweep";
  check_object(node, path);
  check_keys(node, path, {"axis", "start_m", "stop_m", "points"});
  SweepSpec sweep;
  sweep.axis = parse_axis(as_string(required(node, path, "axis"), "sweep.axis"), "sweep.axis");
  sweep.start_m = as_number(required(node, path, "start_m"), "sweep.start_m");
  sweep.stop_m = as_number(required(node, path, "stop_m"), "sweep.stop_m");
  if (!(sweep.start_m < sweep.stop_m)) {
    throw ScenarioError("sweep.stop_m", "out of range: must be > sweep.start_m");
  }
  sweep.points = as_int(required(node, path, "points"), "sweep.points", 2);
  return sweep;
}

ScanBlock parse_scan(const json& node) {
  const std::string path = "scan";
  check_object(node, path);
  check_keys(node, path, {"plane", "u_range_m", "v_range_m", "resolution", "offset_m"});
  ScanBlock scan;
  scan.plane = parse_plane(as_string(required(node, path, "plane"), "scan.plane"), "scan.plane");
  scan.u_range_m = as_range(required(node, path, "u_range_m"), "scan.u_range_m");
  scan.v_range_m = as_range(required(node, path, "v_range_m"), "scan.v_range_m");
  const json& resolution = required(node, path, "resolution");
  if (!resolution.is_array() || resolution.size() != 2) {
    throw ScenarioError("scan.resolution", "expected [u_points, v_points]");
  }
  scan.resolution = {as_int(resolution[0], "scan.resolution[0]", 2), as_int(resolution[1], "scan.resolution[1]", 2)};
  if (node.contains("offset_m")) {
    scan.offset_m = as_number(node["offset_m"], "scan.offset_m");
  }
  return scan;
}

WidebandBlock parse_wideband(const json& node) {
  const std::string path = "wideband";
  check_object(node, path);
  check_keys(node, path, {"bandwidth_hz", "n_subcarriers", "search_range_m"});
  WidebandBlock band;
  band.bandwidth_hz = non_negative(required(node, path, "bandwidth_hz"), "wideband.bandwidth_hz");
  band.n_subcarriers = as_int(required(node, path, "n_subcarriers"), "wideband.n_subcarriers", 1);
  if (node.contains("search_range_m")) {
    band.search_range_m = as_range(node["search_range_m"], "wideband.search_range_m");
    if (!((*band.search_range_m)[0] >= 0.0)) {
      throw ScenarioError("wideband.search_range_m[0]", "out of range: must be >= 0");
    }
  }
  return band;
}

OptimizerBlock parse_optimizer(const json& node) {
  const std::string path = "optimizer";
  check_object(node, path);
  check_keys(node, path, {"tolerance", "max_iterations"});
  OptimizerBlock opt;
  if (node.contains("tolerance")) {
    opt.tolerance = non_negative(node["tolerance"], "optimizer.tolerance");
  }
  if (node.contains("max_iterations")) {
    opt.max_iterations = as_int(node["max_iterations"], "optimizer.max_iterations", 0);
  }
  return opt;
}

Scenario parse_scenario(const json& root) {
  check_object(root, "");
  check_keys(root, "",
             {"name", "carrier_frequency_hz", "array", "users_m", "link", "design", "sweep", "scan", "wideband",
              "optimizer"});
  Scenario s;
  if (root.contains("name")) {
    s.name = as_string(root["name"], "name");
  }
  s.carrier_frequency_hz = positive(required(root, "", "carrier_frequency_hz"), "carrier_frequency_hz");
  s.array = parse_array(required(root, "", "array"));

  const json& users = required(root, "", "users_m");
  if (!users.is_array() || users.empty()) {
    throw ScenarioError("users_m", "expected a non-empty list of [x, y, z] points");
  }
  for (std::size_t k = 0; k < users.size(); ++k) {
    s.users_m.push_back(as_point(users[k], "users_m[" + std::to_string(k) + "]"));
  }

  s.link = parse_link(required(root, "", "link"));
  s.design = parse_design(as_string(required(root, "", "design"), "design"), "design");
  if (root.contains("sweep")) s.sweep = parse_sweep(root["sweep"]);
  if (root.contains("scan")) s.scan = parse_scan(root["scan"]);
  if (root.contains("wideband")) s.wideband = parse_wideband(root["wideband"]);
  if (root.contains("optimizer")) s.optimizer = parse_optimizer(root["optimizer"]);

  // Physical sanity that needs more than one key.
  const double lower_edge = s.wideband ? s.carrier_frequency_hz - 0.5 * s.wideband->bandwidth_hz : 1.0;
  if (!(lower_edge > 0.0)) {
    throw ScenarioError("wideband.bandwidth_hz", "out of range: band extends to non-positive frequencies");
  }
  return s;
}

void apply_override(json& root, const Override& override) {
  const auto& [key, text] = override;
  if (key.empty()) {
    throw ScenarioError("<override>", "empty key");
  }
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  json* node = &root;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = key.find('.', begin);
    const std::string part = key.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (part.empty()) {
      throw ScenarioError(key, "malformed key path");
    }
    if (!node->is_object()) {
      throw ScenarioError(key, "cannot override inside a non-object value");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) {
      *node = json::object();
    }
    begin = dot + 1;
  }
}

}  // namespace

std::string_view to_string(Design design) {
  switch (design) {
    case Design::focus: return "focus";
    case Design::steer: return "steer";
    case Design::sumrate: return "sumrate";
  }
  return "?";
}

double LinkSpec::transmit_power() const {
  return power_dbm ? dbm_to_watts(*power_dbm) : transmit_power_w.value_or(0.0);
}

double LinkSpec::noise_psd() const {
  return noise_psd_dbm_hz ? dbm_to_watts(*noise_psd_dbm_hz) : noise_psd_w_hz.value_or(0.0);
}

LinkBudget<double> LinkSpec::budget() const {
  return LinkBudget<double>(transmit_power(), noise_psd(), bandwidth_hz);
}

ScanSpec<double> ScanBlock::spec() const {
  ScanSpec<double> s;
  s.plane = plane;
  s.u_min = u_range_m[0];
  s.u_max = u_range_m[1];
  s.v_min = v_range_m[0];
  s.v_max = v_range_m[1];
  s.u_points = resolution[0];
  s.v_points = resolution[1];
  s.offset = offset_m;
  return s;
}

ArrayGeometry<double> Scenario::build_array() const {
  return build_upa(array.length_m, array.width_m, array.spacing_wavelengths, Carrier<double>(carrier_frequency_hz),
                   Vec3<double>(array.center_m[0], array.center_m[1], array.center_m[2]));
}

Vec3<double> Scenario::user(std::size_t k) const {
  const Point& p = users_m.at(k);
  return {p[0], p[1], p[2]};
}

Scenario load_scenario(std::string_view document, const std::vector<Override>& overrides) {
  json root;
  const bool blank = document.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (blank) {
    root = json::object();
  } else {
    try {
      root = json::parse(document);
    } catch (const json::parse_error& e) {
      throw ScenarioError("<document>", std::string("malformed JSON: ") + e.what());
    }
  }
  for (const auto& override : overrides) {
    if (!root.is_object()) {
      break;
    }
    apply_override(root, override);
  }
  return parse_scenario(root);
}

Scenario load_scenario_file(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_scenario(text.str(), overrides);
}

Override parse_override(std::string_view text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ScenarioError(std::string(text), "override must look like key=value");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

std::string scenario_to_json(const Scenario& s) {
  json root = json::object();
  if (!s.name.empty()) {
    root["name"] = s.name;
  }
  root["carrier_frequency_hz"] = s.carrier_frequency_hz;
  root["array"] = {{"length_m", s.array.length_m},
                   {"width_m", s.array.width_m},
                   {"spacing_wavelengths", s.array.spacing_wavelengths},
                   {"center_m", s.array.center_m}};
  root["users_m"] = s.users_m;

  json link = json::object();
  if (s.link.power_dbm) link["power_dbm"] = *s.link.power_dbm;
  if (s.link.transmit_power_w) link["transmit_power_w"] = *s.link.transmit_power_w;
  if (s.link.noise_psd_dbm_hz) link["noise_psd_dbm_hz"] = *s.link.noise_psd_dbm_hz;
  if (s.link.noise_psd_w_hz) link["noise_psd_w_hz"] = *s.link.noise_psd_w_hz;
  link["bandwidth_hz"] = s.link.bandwidth_hz;
  root["link"] = link;
  root["design"] = std::string(to_string(s.design));

  if (s.sweep) {
    root["sweep"] = {{"axis", axis_name(s.sweep->axis)},
                     {"start_m", s.sweep->start_m},
                     {"stop_m", s.sweep->stop_m},
                     {"points", s.sweep->points}};
  }
  if (s.scan) {
    root["scan"] = {{"plane", std::string(to_string(s.scan->plane))},
                    {"u_range_m", s.scan->u_range_m},
                    {"v_range_m", s.scan->v_range_m},
                    {"resolution", s.scan->resolution},
                    {"offset_m", s.scan->offset_m}};
  }
  if (s.wideband) {
    json band = {{"bandwidth_hz", s.wideband->bandwidth_hz}, {"n_subcarriers", s.wideband->n_subcarriers}};
    if (s.wideband->search_range_m) {
      band["search_range_m"] = *s.wideband->search_range_m;
    }
    root["wideband"] = band;
  }
  if (s.optimizer) {
    root["optimizer"] = {{"tolerance", s.optimizer->tolerance}, {"max_iterations", s.optimizer->max_iterations}};
  }
  return root.dump(2);
}

}  // namespace nearfield
