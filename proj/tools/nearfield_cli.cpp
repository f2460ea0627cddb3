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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nearfield/experiments.hpp"

namespace {

using namespace nearfield;

constexpr int exit_invalid = 1;
constexpr int exit_io = 3;

struct RunOptions {
  std::string scenario;
  std::string output = ".";
  std::vector<std::string> sets;
};

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

Scenario load(const RunOptions& options) {
  std::vector<Override> overrides;
  for (const auto& text : options.sets) {
    overrides.push_back(parse_override(text));
  }
  return load_scenario_file(options.scenario, overrides);
}

double column_max(const ResultTable& table, std::string_view name) {
  const auto values = table.column(name);
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

int cmd_region(double frequency, std::optional<double> aperture, std::optional<double> length,
               std::optional<double> width, const std::vector<double>& point) {
  const Carrier<double> carrier(frequency);
  double d = 0.0;
  if (aperture) {
    d = *aperture;
  } else if (length && width) {
    // Nominal rectangle diagonal.
    d = std::hypot(*length, *width);
  } else {
    throw CLI::ValidationError("region", "give --aperture or both --length and --width");
  }
  const double far = fraunhofer_distance(d, carrier);
  if (far == 0.0) {
    std::cout << "fraunhofer: 0 m (always far-field)\n";
  } else {
    std::cout << "fraunhofer: " << fixed(far, 1) << " m\n";
  }
  std::cout << "reactive_bound: " << fixed(reactive_bound(d, carrier), 3) << " m\n";
  if (!point.empty()) {
    if (point.size() != 3) {
      throw CLI::ValidationError("--point", "expected x y z");
    }
    const double distance = std::sqrt(point[0] * point[0] + point[1] * point[1] + point[2] * point[2]);
    const auto region = classify_distance(distance, d, carrier);
    std::cout << "region: " << to_string(region.label) << " (distance " << format_number(distance) << " m)\n";
  }
  return 0;
}

int cmd_sweep(const RunOptions& options) {
  const auto table = run_fig3(load(options));
  const auto path = write_table(table, options.output, "fig3");
  std::cout << "fig3: wrote " << table.rows.size() << " rows to " << path.string() << " (peak se_focus "
            << fixed(column_max(table, "se_focus_bpshz"), 3) << " bits/s/Hz)\n";
  return 0;
}

int cmd_two_user(const RunOptions& options) {
  const auto table = run_fig4(load(options));
  const auto path = write_table(table, options.output, "fig4");
  std::cout << "fig4: wrote " << table.rows.size() << " rows to " << path.string() << " (peak se_user1_focus "
            << fixed(column_max(table, "se_user1_focus"), 3) << ", se_user2_focus "
            << fixed(column_max(table, "se_user2_focus"), 3) << " bits/s/Hz)\n";
  return 0;
}

int cmd_scan(const RunOptions& options) {
  const Scenario scenario = load(options);
  const auto [first, second] = run_fig5(scenario);
  const auto metadata = make_metadata("fig5", scenario);
  const auto p1 = write_field_scan(first, metadata, options.output, "fig5_user1");
  const auto p2 = write_field_scan(second, metadata, options.output, "fig5_user2");
  const Vec3<double> peak = first.peak_point();
  std::cout << "fig5: wrote " << first.spec.u_points << "x" << first.spec.v_points << " scans to " << p1.string()
            << ", " << p2.string() << " (user-1 peak at " << format_number(peak.x()) << ", "
            << format_number(peak.y()) << ", " << format_number(peak.z()) << " m)\n";
  return 0;
}

int cmd_beamsplit(const RunOptions& options) {
  const auto table = run_beamsplit(load(options));
  const auto path = write_table(table, options.output, "beamsplit");
  double drift = 0.0;
  for (double d : table.column("drift_m")) {
    drift = std::max(drift, std::abs(d));
  }
  std::cout << "beamsplit: wrote " << table.rows.size() << " rows to " << path.string() << " (peak |drift| "
            << format_number(drift) << " m)\n";
  return 0;
}

void add_run_options(CLI::App* sub, RunOptions& options, bool with_output) {
  sub->add_option("--scenario", options.scenario, "Scenario JSON document")->required()->check(CLI::ExistingFile);
  if (with_output) {
    sub->add_option("-o,--output", options.output, "Output directory");
  }
  sub->add_option("--set", options.sets, "Override a scenario key (key=value, dotted paths); repeatable");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field beam focusing simulator"};
  app.require_subcommand(1);

  double frequency = 0.0;
  std::optional<double> aperture, length, width;
  std::vector<double> point;
  auto* region = app.add_subcommand("region", "Fraunhofer distance, reactive bound and region of a point");
  region->add_option("--freq", frequency, "Carrier frequency in Hz")->required();
  region->add_option("--aperture", aperture, "Array aperture in m");
  region->add_option("--length", length, "Array length in m");
  region->add_option("--width", width, "Array width in m");
  region->add_option("--point", point, "Query point x y z in m (array at the origin)")->expected(3);

  RunOptions sweep_opts, two_user_opts, scan_opts, split_opts, validate_opts;
  auto* sweep = app.add_subcommand("sweep", "Single-user focusing vs steering along a line");
  add_run_options(sweep, sweep_opts, true);
  auto* two_user = app.add_subcommand("two-user", "Two-user spectral efficiency sweep");
  add_run_options(two_user, two_user_opts, true);
  auto* scan = app.add_subcommand("scan", "Normalized power maps of the two focused beams");
  add_run_options(scan, scan_opts, true);
  auto* split = app.add_subcommand("beamsplit", "Wideband focal drift of frequency-flat weights");
  add_run_options(split, split_opts, true);
  auto* validate = app.add_subcommand("validate", "Load and validate a scenario document");
  add_run_options(validate, validate_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (region->parsed()) return cmd_region(frequency, aperture, length, width, point);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (two_user->parsed()) return cmd_two_user(two_user_opts);
    if (scan->parsed()) return cmd_scan(scan_opts);
    if (split->parsed()) return cmd_beamsplit(split_opts);
    if (validate->parsed()) {
      load(validate_opts);
      std::cout << "OK\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n" << region->help();
    return exit_invalid;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  }
  return exit_invalid;
}
