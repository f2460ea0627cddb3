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

#include "nearfield/experiments.hpp"

namespace nearfield {

namespace {

struct Direction {
  Vec3<double> unit;
  double distance;
};

Direction toward(const ArrayGeometry<double>& array, const Vec3<double>& point) {
  const Vec3<double> offset = point - array.center;
  const double distance = offset.norm();
  if (!(distance > 0.0)) {
    throw ShapeMismatch("user located at the array center has no steering direction");
  }
  return {offset / distance, distance};
}

SumRateOptions<double> optimizer_options(const Scenario& scenario) {
  SumRateOptions<double> options;
  if (scenario.optimizer) {
    options.tolerance = scenario.optimizer->tolerance;
    options.max_iterations = scenario.optimizer->max_iterations;
  }
  return options;
}

Vec3<double> moved(Vec3<double> point, int axis, double coordinate) {
  point(axis) = coordinate;
  return point;
}

double se_at(const ArrayGeometry<double>& array, const Vec3<double>& position, const Precoder<double>& precoder,
             Eigen::Index stream, double noise_power) {
  const auto channel = nearfield_los(array, position, array.carrier.frequency());
  const double signal = received_power(channel, precoder.column(stream));
  double interference = 0.0;
  for (Eigen::Index j = 0; j < precoder.num_streams(); ++j) {
    if (j != stream) {
      interference += received_power(channel, precoder.column(j));
    }
  }
  return spectral_efficiency(signal / (interference + noise_power));
}

void require_users(const Scenario& scenario, std::size_t count, const char* runner) {
  if (scenario.users_m.size() != count) {
    throw ShapeMismatch(std::string(runner) + " needs exactly " + std::to_string(count) + " user(s), scenario has " +
                        std::to_string(scenario.users_m.size()));
  }
}

}  // namespace

std::vector<double> sweep_values(const SweepSpec& sweep, const std::vector<double>& forced) {
  if (sweep.points < 2 || !(sweep.start_m < sweep.stop_m)) {
    throw InvalidParameter("sweep needs >= 2 points over an increasing range");
  }
  std::vector<double> values(static_cast<std::size_t>(sweep.points));
  const double step = (sweep.stop_m - sweep.start_m) / double(sweep.points - 1);
  for (int i = 0; i < sweep.points; ++i) {
    values[static_cast<std::size_t>(i)] = i + 1 == sweep.points ? sweep.stop_m : sweep.start_m + step * i;
  }
  for (double target : forced) {
    if (target < sweep.start_m || target > sweep.stop_m) {
      continue;
    }
    const auto nearest = std::min_element(values.begin(), values.end(), [target](double a, double b) {
      return std::abs(a - target) < std::abs(b - target);
    });
    *nearest = target;
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

Precoder<double> design_focused(const Scenario& scenario, const ArrayGeometry<double>& array) {
  const double frequency = array.carrier.frequency();
  const double power = scenario.link.transmit_power();
  const auto users = static_cast<Eigen::Index>(scenario.users_m.size());
  if (power == 0.0) {
    return {CMatrix<double>::Zero(array.size(), users), 0.0};
  }

  std::vector<ChannelVector<double>> channels;
  for (std::size_t k = 0; k < scenario.users_m.size(); ++k) {
    channels.push_back(nearfield_los(array, scenario.user(k), frequency));
  }

  switch (scenario.design) {
    case Design::steer:
      return design_steered(scenario, array);
    case Design::sumrate:
      return sum_rate_precoder(channels, power, scenario.link.budget().noise_power(), optimizer_options(scenario))
          .precoder;
    case Design::focus:
      break;
  }
  Precoder<double> precoder{CMatrix<double>(array.size(), users), power};
  for (Eigen::Index k = 0; k < users; ++k) {
    precoder.columns.col(k) = conjugate_focus(channels[static_cast<std::size_t>(k)], power / double(users)).column(0);
  }
  return precoder;
}

Precoder<double> design_steered(const Scenario& scenario, const ArrayGeometry<double>& array) {
  const double frequency = array.carrier.frequency();
  const double power = scenario.link.transmit_power();
  const auto users = static_cast<Eigen::Index>(scenario.users_m.size());
  if (power == 0.0) {
    return {CMatrix<double>::Zero(array.size(), users), 0.0};
  }

  if (users == 1) {
    const Direction d = toward(array, scenario.user(0));
    return steer(array, d.unit, d.distance, frequency, power);
  }

  // The steering designer only knows the plane-wave model: fixed beams per
  // user and a sum-rate power split evaluated on far-field channels.
  std::vector<ChannelVector<double>> planar;
  CMatrix<double> beams(array.size(), users);
  for (std::size_t k = 0; k < scenario.users_m.size(); ++k) {
    const Direction d = toward(array, scenario.user(k));
    planar.push_back(farfield_steering(array, d.unit, d.distance, frequency));
    beams.col(static_cast<Eigen::Index>(k)) = conjugate_focus(planar.back(), 1.0).column(0);
  }
  return allocate_beam_power(planar, beams, power, scenario.link.budget().noise_power());
}

ResultTable run_fig3(const Scenario& scenario) {
  require_users(scenario, 1, "fig3");
  if (!scenario.sweep) {
    throw ShapeMismatch("fig3 needs a sweep block");
  }
  const auto array = scenario.build_array();
  const double noise = scenario.link.budget().noise_power();
  const Vec3<double> focal = scenario.user(0);
  const int axis = scenario.sweep->axis;

  // Both configurations are designed once and held fixed over the sweep.
  const Precoder<double> focus = design_focused(scenario, array);
  const Precoder<double> steered = design_steered(scenario, array);

  ResultTable table;
  const char* axis_label[] = {"x_m", "y_m", "z_m"};
  table.columns = {axis_label[axis], "se_focus_bpshz", "se_steer_bpshz"};
  for (double s : sweep_values(*scenario.sweep, {focal(axis)})) {
    const Vec3<double> position = moved(focal, axis, s);
    table.rows.push_back({s, se_at(array, position, focus, 0, noise), se_at(array, position, steered, 0, noise)});
  }
  table.metadata = make_metadata("fig3", scenario);
  return table;
}

ResultTable run_fig4(const Scenario& scenario) {
  require_users(scenario, 2, "fig4");
  if (!scenario.sweep) {
    throw ShapeMismatch("fig4 needs a sweep block");
  }
  const auto array = scenario.build_array();
  const double noise = scenario.link.budget().noise_power();
  const int axis = scenario.sweep->axis;
  const Vec3<double> first = scenario.user(0);
  const Vec3<double> second = scenario.user(1);

  const Precoder<double> focus = design_focused(scenario, array);
  const Precoder<double> steered = design_steered(scenario, array);

  ResultTable table;
  const char* axis_label[] = {"x_m", "y_m", "z_m"};
  table.columns = {axis_label[axis], "se_user1_focus", "se_user2_focus", "se_user1_steer", "se_user2_steer"};
  // A user's SINR depends only on its own channel, so moving one user while
  // the other stays at its focal point is evaluated per column.
  for (double s : sweep_values(*scenario.sweep, {first(axis), second(axis)})) {
    const Vec3<double> p1 = moved(first, axis, s);
    const Vec3<double> p2 = moved(second, axis, s);
    table.rows.push_back({s, se_at(array, p1, focus, 0, noise), se_at(array, p2, focus, 1, noise),
                          se_at(array, p1, steered, 0, noise), se_at(array, p2, steered, 1, noise)});
  }
  table.metadata = make_metadata("fig4", scenario);
  return table;
}

std::pair<FieldScan<double>, FieldScan<double>> run_fig5(const Scenario& scenario) {
  require_users(scenario, 2, "fig5");
  if (!scenario.scan) {
    throw ShapeMismatch("fig5 needs a scan block");
  }
  const auto array = scenario.build_array();
  const Precoder<double> focus = design_focused(scenario, array);
  const ScanSpec<double> spec = scenario.scan->spec();
  const double frequency = scenario.carrier_frequency_hz;
  return {field_scan(array, focus.column(0), spec, frequency), field_scan(array, focus.column(1), spec, frequency)};
}

ResultTable run_beamsplit(const Scenario& scenario) {
  if (scenario.users_m.empty()) {
    throw ShapeMismatch("beamsplit needs a user (the design focal point)");
  }
  if (!scenario.wideband) {
    throw ShapeMismatch("beamsplit needs a wideband block");
  }
  const auto array = scenario.build_array();
  const double fc = scenario.carrier_frequency_hz;
  const Vec3<double> focal = scenario.user(0);
  const Direction d = toward(array, focal);

  const auto design_channel = nearfield_los(array, focal, fc);
  const Precoder<double> flat = frequency_flat_focus(design_channel, scenario.link.transmit_power());
  const auto band = wideband(array, focal, fc, scenario.wideband->bandwidth_hz, scenario.wideband->n_subcarriers);

  DepthSearch<double> search;
  search.origin = array.center;
  search.direction = d.unit;
  search.design_depth = d.distance;
  search.min_depth = 0.5 * d.distance;
  search.max_depth = 1.5 * d.distance;
  if (scenario.wideband->search_range_m) {
    search.min_depth = (*scenario.wideband->search_range_m)[0];
    search.max_depth = (*scenario.wideband->search_range_m)[1];
  }
  search.resolution = std::min(0.01, (search.max_depth - search.min_depth) / 100.0);
  const auto drift = focal_drift(array, band, flat.column(0), search);

  // Loss of the frequency-flat beam at the design point, relative to the
  // matched beam on the same subcarrier and referenced to the band center.
  const double reference = focusing_efficiency(design_channel, flat.column(0));
  ResultTable table;
  table.columns = {"subcarrier_hz", "drift_m", "power_loss_db_at_design_point"};
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double efficiency = focusing_efficiency(band.subcarriers[i], flat.column(0));
    table.rows.push_back({band.subcarriers[i].frequency, drift[i].drift, 10.0 * std::log10(reference / efficiency)});
  }
  table.metadata = make_metadata("beamsplit", scenario);
  return table;
}

}  // namespace nearfield
