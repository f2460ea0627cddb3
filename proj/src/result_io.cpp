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

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nearfield/experiments.hpp"

#ifndef NEARFIELD_VERSION
#define NEARFIELD_VERSION "0.0.0"
#endif

namespace nearfield {

using json = nlohmann::json;

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << content;
  out.close();
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace

std::size_t ResultTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      return i;
    }
  }
  throw std::out_of_range("no column named " + std::string(name));
}

std::vector<double> ResultTable::column(std::string_view name) const {
  const std::size_t index = column_index(name);
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& row : rows) {
    values.push_back(row.at(index));
  }
  return values;
}

std::string artifact_version() { return NEARFIELD_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

ResultMetadata make_metadata(std::string runner, const Scenario& scenario) {
  return {std::move(runner), scenario_to_json(scenario), artifact_version(), utc_timestamp()};
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << quote_csv(table.columns[i]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("result row width does not match the column count");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_number(row[i]);
    }
    out << "\r\n";
  }
  return out.str();
}

std::string metadata_json(const ResultMetadata& metadata, const std::string& extra_json) {
  json doc = {{"runner", metadata.runner},
              {"artifact_version", metadata.version},
              {"timestamp", metadata.timestamp},
              {"scenario", json::parse(metadata.scenario_json)}};
  const json extra = json::parse(extra_json);
  for (const auto& item : extra.items()) {
    doc[item.key()] = item.value();
  }
  return doc.dump(2) + "\n";
}

std::string field_scan_csv(const FieldScan<double>& scan) {
  const auto& s = scan.spec;
  const std::string plane(to_string(s.plane));
  std::ostringstream out;
  out << "u_axis," << plane[0] << ',' << format_number(s.u_min) << ',' << format_number(s.u_max) << ",v_axis,"
      << plane[1] << ',' << format_number(s.v_min) << ',' << format_number(s.v_max) << ",offset_m,"
      << format_number(s.offset) << "\r\n";
  out << "resolution," << s.u_points << ',' << s.v_points << "\r\n";
  for (Eigen::Index i = 0; i < s.u_points; ++i) {
    for (Eigen::Index j = 0; j < s.v_points; ++j) {
      out << (j ? "," : "") << format_number(scan.normalized(i, j));
    }
    out << "\r\n";
  }
  return out.str();
}

std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir,
                                  const std::string& basename) {
  std::filesystem::create_directories(dir);
  const auto csv = dir / (basename + ".csv");
  write_file(csv, to_csv(table));
  const json extra = {{"columns", table.columns}, {"rows", table.rows.size()}};
  write_file(dir / (basename + ".json"), metadata_json(table.metadata, extra.dump()));
  return csv;
}

std::filesystem::path write_field_scan(const FieldScan<double>& scan, const ResultMetadata& metadata,
                                       const std::filesystem::path& dir, const std::string& basename) {
  std::filesystem::create_directories(dir);
  const auto csv = dir / (basename + ".csv");
  write_file(csv, field_scan_csv(scan));
  const Vec3<double> peak = scan.peak_point();
  const json extra = {{"frequency_hz", scan.frequency},
                      {"peak_power_w", scan.peak},
                      {"peak_point_m", {peak.x(), peak.y(), peak.z()}},
                      {"invalid_samples", (scan.valid == false).count()}};
  write_file(dir / (basename + ".json"), metadata_json(metadata, extra.dump()));
  return csv;
}

}  // namespace nearfield
