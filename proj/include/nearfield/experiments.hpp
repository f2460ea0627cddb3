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

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nearfield/nearfield.hpp"

namespace nearfield {

using Point = std::array<double, 3>;

/// Document validation failure; key_path() names the offending key
/// ("link.bandwidth_hz", "users_m[1]", ...).
class ScenarioError : public std::runtime_error {
public:
  ScenarioError(std::string key_path, const std::string& message)
      : std::runtime_error(key_path + ": " + message), key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

private:
  std::string key_path_;
};

// Scenario is valid but does not fit the requested runner.
class ShapeMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Design { focus, steer, sumrate };
std::string_view to_string(Design design);

struct ArraySpec {
  double length_m = 0.0;
  double width_m = 0.0;
  double spacing_wavelengths = 1.0;
  Point center_m{0.0, 0.0, 0.0};
  bool operator==(const ArraySpec&) const = default;
};

// Exactly one of each power/noise pair is set.
struct LinkSpec {
  std::optional<double> power_dbm;
  std::optional<double> transmit_power_w;
  std::optional<double> noise_psd_dbm_hz;
  std::optional<double> noise_psd_w_hz;
  double bandwidth_hz = 0.0;

  double transmit_power() const;  // watts
  double noise_psd() const;       // W/Hz
  LinkBudget<double> budget() const;
  bool operator==(const LinkSpec&) const = default;
};

struct SweepSpec {
  int axis = 2;  // 0 = x, 1 = y, 2 = z
  double start_m = 0.0;
  double stop_m = 0.0;
  int points = 2;
  bool operator==(const SweepSpec&) const = default;
};

struct ScanBlock {
  Plane plane = Plane::xz;
  std::array<double, 2> u_range_m{0.0, 1.0};
  std::array<double, 2> v_range_m{0.0, 1.0};
  std::array<int, 2> resolution{2, 2};
  double offset_m = 0.0;

  ScanSpec<double> spec() const;
  bool operator==(const ScanBlock&) const = default;
};

struct WidebandBlock {
  double bandwidth_hz = 0.0;
  int n_subcarriers = 1;
  std::optional<std::array<double, 2>> search_range_m;
  bool operator==(const WidebandBlock&) const = default;
};

struct OptimizerBlock {
  double tolerance = 1e-5;
  int max_iterations = 500;
  bool operator==(const OptimizerBlock&) const = default;
};

struct Scenario {
  std::string name;
  double carrier_frequency_hz = 0.0;
  ArraySpec array;
  std::vector<Point> users_m;
  LinkSpec link;
  Design design = Design::focus;
  std::optional<SweepSpec> sweep;
  std::optional<ScanBlock> scan;
  std::optional<WidebandBlock> wideband;
  std::optional<OptimizerBlock> optimizer;

  ArrayGeometry<double> build_array() const;
  Vec3<double> user(std::size_t k) const;
  bool operator==(const Scenario&) const = default;
};

using Override = std::pair<std::string, std::string>;

/// Parses and validates a scenario document (JSON, strict: unknown keys are
/// rejected). `overrides` are dotted key paths with JSON or bare-string
/// values, applied to the document before validation.
Scenario load_scenario(std::string_view document, const std::vector<Override>& overrides = {});
Scenario load_scenario_file(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Canonical JSON form; load_scenario(scenario_to_json(s)) == s.
std::string scenario_to_json(const Scenario& scenario);

/// Parses "key=value".
Override parse_override(std::string_view text);

struct ResultMetadata {
  std::string runner;
  std::string scenario_json;
  std::string version;
  std::string timestamp;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  ResultMetadata metadata;

  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;
};

/// Sweep coordinates: `points` evenly spaced values, with every value in
/// `forced` that lies inside [start, stop] substituted for its nearest grid
/// entry.
std::vector<double> sweep_values(const SweepSpec& sweep, const std::vector<double>& forced);

ResultTable run_fig3(const Scenario& scenario);
ResultTable run_fig4(const Scenario& scenario);
std::pair<FieldScan<double>, FieldScan<double>> run_fig5(const Scenario& scenario);
ResultTable run_beamsplit(const Scenario& scenario);

/// Focused (per scenario.design) and far-field steered precoders for the
/// scenario's users.
Precoder<double> design_focused(const Scenario& scenario, const ArrayGeometry<double>& array);
Precoder<double> design_steered(const Scenario& scenario, const ArrayGeometry<double>& array);

// ----- Result files ---------------------------------------------------------

std::string artifact_version();
std::string utc_timestamp();
ResultMetadata make_metadata(std::string runner, const Scenario& scenario);

std::string format_number(double value);

/// RFC-4180 CSV with a mandatory header row.
std::string to_csv(const ResultTable& table);
std::string metadata_json(const ResultMetadata& metadata, const std::string& extra_json = "{}");

/// Two header lines (axis ranges, resolution) then one CSV line per u index
/// holding the normalized values along v.
std::string field_scan_csv(const FieldScan<double>& scan);

/// Writes <dir>/<basename>.csv and the <dir>/<basename>.json sidecar.
/// Returns the CSV path.
std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir,
                                  const std::string& basename);
std::filesystem::path write_field_scan(const FieldScan<double>& scan, const ResultMetadata& metadata,
                                       const std::filesystem::path& dir, const std::string& basename);

}  // namespace nearfield
