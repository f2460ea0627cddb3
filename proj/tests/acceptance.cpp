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

// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any
// criterion fails. Tolerances are fixed here.

#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "nearfield/experiments.hpp"

using namespace nearfield;

namespace {

const std::filesystem::path scenarios = NEARFIELD_SCENARIO_DIR;
constexpr double pi_v = 3.141592653589793238462643383279502884;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

double row_value(const ResultTable& t, std::string_view column, double at) {
  const auto x = t.column(t.columns.front());
  const auto y = t.column(column);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == at) return y[i];
  }
  throw std::out_of_range("sweep does not contain the requested coordinate");
}

double argmax_coordinate(const ResultTable& t, std::string_view column) {
  const auto x = t.column(t.columns.front());
  const auto y = t.column(column);
  return x[std::size_t(std::max_element(y.begin(), y.end()) - y.begin())];
}

Outcome fraunhofer_anchors() {
  const Carrier<double> f(28e9);
  const double a = fraunhofer_distance(0.5, f);
  const double b = fraunhofer_distance(0.894, f);
  return {std::abs(a - 46.7) <= 0.5 && std::abs(b - 149.4) <= 1.0, fmt("d_F(0.5 m)=%.3f m, d_F(0.894 m)=%.3f m", a, b)};
}

Outcome fig3_shape() {
  const auto t = run_fig3(load_scenario_file(scenarios / "paper_fig3.json"));
  const double focus = row_value(t, "se_focus_bpshz", 10.0);
  const double steer = row_value(t, "se_steer_bpshz", 10.0);
  const auto z = t.column("z_m");
  const auto f = t.column("se_focus_bpshz");
  const auto s = t.column("se_steer_bpshz");
  double crossover = -1.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (f[i] < s[i]) {
      crossover = z[i];
      break;
    }
  }
  return {focus > steer && crossover > 0.0,
          fmt("z=10: focus %.3f vs steer %.3f bits/s/Hz; first z with steer ahead: %.3f m", focus, steer, crossover)};
}

Outcome fig4_collapse() {
  const auto t = run_fig4(load_scenario_file(scenarios / "paper_fig4.json"));
  const double s1 = row_value(t, "se_user1_steer", 8.0);
  const double s2 = row_value(t, "se_user2_steer", 22.0);
  const double f1 = row_value(t, "se_user1_focus", 8.0);
  const double f2 = row_value(t, "se_user2_focus", 22.0);
  const double p1 = argmax_coordinate(t, "se_user1_focus");
  const double p2 = argmax_coordinate(t, "se_user2_focus");
  const bool pass = std::min(s1, s2) < 0.1 && f1 > 0.5 && f2 > 0.5 && std::abs(p1 - 8.0) <= 1.0 && std::abs(p2 - 22.0) <= 1.0;
  return {pass, fmt("steer min SE %.3g; focus SE %.3f / %.3f; focus peaks at %.3f / %.3f m", std::min(s1, s2), f1, f2, p1, p2)};
}

Outcome fig5_focus() {
  const auto [first, second] = run_fig5(load_scenario_file(scenarios / "paper_fig5.json"));
  (void)second;
  const auto& spec = first.spec;
  const Vec3<double> peak = first.peak_point();
  const bool located = std::abs(peak.x() - 0.0) <= spec.u_step() * (1.0 + 1e-9) &&
                       std::abs(peak.z() - 8.0) <= spec.v_step() * (1.0 + 1e-9);
  const Eigen::Index iu = Eigen::Index(std::lround((0.0 - spec.u_min) / spec.u_step()));
  const Eigen::Index iv = Eigen::Index(std::lround((22.0 - spec.v_min) / spec.v_step()));
  const double at_user2 = first.normalized(iu, iv);
  const double suppression = at_user2 > 0.0 ? -10.0 * std::log10(at_user2) : INFINITY;
  return {located && suppression >= 10.0,
          fmt("user-1 argmax at (x,z)=(%.3f, %.3f) m, cell %.3f x %.3f m; (0,22) is %.1f dB below peak", peak.x(),
              peak.z(), spec.u_step(), spec.v_step(), suppression)};
}

Outcome mrt_optimality() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> side(0.02, 0.1), lateral(-1.0, 1.0), depth(0.3, 5.0);
  std::normal_distribution<double> g;
  const Carrier<double> f(28e9);
  double worst_margin = INFINITY, worst_closed = 0.0;
  for (int geometry = 0; geometry < 20; ++geometry) {
    const auto array = build_upa(side(rng), side(rng), 0.5, f);
    const auto h = nearfield_los(array, Vec3<double>(lateral(rng), lateral(rng), depth(rng)), 28e9);
    const double best = received_power(h, conjugate_focus(h, 1.0).column(0));
    worst_closed = std::max(worst_closed, std::abs(best / h.gains.squaredNorm() - 1.0));
    for (int t = 0; t < 1000; ++t) {
      CVector<double> w(h.size());
      for (auto& v : w) v = {g(rng), g(rng)};
      w /= w.norm();
      worst_margin = std::min(worst_margin, best / received_power(h, w));
    }
  }
  return {worst_margin >= 1.0 && worst_closed <= 1e-9,
          fmt("min MRT/random power ratio %.3f; max |P|h|^2 relative error| %.2e", worst_margin, worst_closed)};
}

Outcome boundary_phase() {
  const Carrier<double> f(28e9);
  double worst = 0.0;
  for (double d = 0.1; d <= 1.0 + 1e-12; d += 0.1) {
    const double side = d / std::sqrt(2.0);
    const auto array = build_upa(side, side, 1.0, f);
    const double dev = max_phase_deviation(array, Vec3<double>(0, 0, fraunhofer_distance(array.aperture, f)));
    worst = std::max(worst, std::abs(dev / (pi_v / 8.0) - 1.0));
  }
  return {worst <= 0.02, fmt("max relative deviation from pi/8 over apertures 0.1-1 m: %.2e", worst)};
}

Outcome farfield_convergence() {
  const Carrier<double> f(28e9);
  const auto array = build_upa(0.8, 0.4, 1.0, f);
  double worst = 0.0;
  for (const Vec3<double> dir : {Vec3<double>(0, 0, 1), Vec3<double>(0.3, -0.2, 1).normalized()}) {
    const double d = 100.0 * fraunhofer_distance(array.aperture, f);
    const auto h = nearfield_los(array, Vec3<double>(d * dir), 28e9);
    const auto a = farfield_steering(array, dir, d, 28e9);
    for (Eigen::Index n = 0; n < h.size(); ++n) worst = std::max(worst, std::abs(std::arg(h.gains(n) * std::conj(a.gains(n)))));
  }
  return {worst < 0.01, fmt("max per-element phase gap at 100 d_F: %.3e rad", worst)};
}

Outcome optimizer_monotone() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> side(0.02, 0.08), lateral(-1.0, 1.0), depth(0.3, 4.0);
  const Carrier<double> f(28e9);
  double worst_drop = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto array = build_upa(side(rng), side(rng), 0.5, f);
    std::vector<ChannelVector<double>> channels;
    for (int k = 0; k < 2 + t % 3; ++k) {
      channels.push_back(nearfield_los(array, Vec3<double>(lateral(rng), lateral(rng), depth(rng)), 28e9));
    }
    const auto trace = sum_rate_precoder(channels, 0.01, 4e-13).report.sum_rate_trace;
    for (std::size_t i = 1; i < trace.size(); ++i) worst_drop = std::max(worst_drop, trace[i - 1] - trace[i]);
  }
  const auto array = build_upa(0.8, 0.4, 1.0, f);
  const std::vector<ChannelVector<double>> one{nearfield_los(array, Vec3<double>(0, 0, 10), 28e9)};
  const double noise = 3.981071705534985e-13;
  const auto single = sum_rate_precoder(one, 0.01, noise);
  const double closed = std::log2(1.0 + 0.01 * one[0].gains.squaredNorm() / noise);
  const double gap = std::abs(sum_rate(one, single.precoder, noise) - closed);
  return {worst_drop <= 1e-6 && gap <= 1e-6, fmt("largest trace drop %.2e; K=1 gap to MRT rate %.2e bits/s/Hz", worst_drop, gap)};
}

Outcome beam_split() {
  const auto t = run_beamsplit(load_scenario_file(scenarios / "paper_beamsplit.json"));
  const auto f = t.column("subcarrier_hz");
  const auto drift = t.column("drift_m");
  const auto loss = t.column("power_loss_db_at_design_point");
  const std::size_t mid = f.size() / 2;
  // Center drift within the 1 cm search resolution.
  const bool center = f.size() % 2 == 1 && f[mid] == 28e9 && std::abs(drift[mid]) <= 0.01;
  const bool nonnegative = *std::min_element(loss.begin(), loss.end()) >= 0.0;
  const bool edges = loss.front() > 0.0 && loss.back() > 0.0;
  return {center && nonnegative && edges,
          fmt("center drift %.2e m; edge drifts %.4f / %.4f m; edge losses %.3e / %.3e dB", drift[mid], drift.front(),
              drift.back(), loss.front(), loss.back())};
}

Outcome noise_floor() {
  const auto budget = LinkBudget<double>::from_dbm(10.0, -174.0, 1e8);
  const double dbm = watts_to_dbm(budget.noise_power());
  return {std::abs(dbm / -94.0 - 1.0) <= 0.005, fmt("noise power %.4e W = %.4f dBm", budget.noise_power(), dbm)};
}

}  // namespace

int main(int argc, char** argv) {
  // An optional argument selects a single criterion by number.
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 fraunhofer-anchors", fraunhofer_anchors}, {"2 fig3-shape", fig3_shape},
      {"3 fig4-interference-collapse", fig4_collapse}, {"4 fig5-focus-quality", fig5_focus},
      {"5 mrt-optimality", mrt_optimality},          {"6 boundary-phase", boundary_phase},
      {"7 farfield-convergence", farfield_convergence}, {"8 optimizer-monotonicity", optimizer_monotone},
      {"9 beam-split", beam_split},                    {"10 noise-floor", noise_floor}};
  int failures = 0, ran = 0;
  for (const auto& [name, check] : criteria) {
    if (only != 0 && std::atoi(name) != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str(), seconds);
    failures += outcome.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion numbered %d\n", only);
    return 2;
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
