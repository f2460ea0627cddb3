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

#include <catch_amalgamated.hpp>

#include <Eigen/Geometry>

#include "oracle.hpp"

using namespace nearfield;

namespace {

const Carrier<double> f28(28e9);

double max_phase_gap(const ChannelVector<double>& a, const ChannelVector<double>& b) {
  double gap = 0.0;
  for (Eigen::Index n = 0; n < a.size(); ++n) gap = std::max(gap, std::abs(std::arg(a.gains(n) * std::conj(b.gains(n)))));
  return gap;
}

}  // namespace

TEST_CASE("channel - two-element hand case") {
  // Elements at the origin and 1 cm along x, receiver 1 m on boresight.
  ArrayGeometry<double> array{Positions<double>(3, 2), Plane::xy, Vec3<double>::Zero(), 0.01, f28, 2, 1};
  array.elements << 0.0, 0.01, 0.0, 0.0, 0.0, 0.0;
  const auto h = nearfield_los(array, Vec3<double>(0, 0, 1), 28e9);
  REQUIRE(h.size() == 2);
  // Frozen from the numpy oracle.
  CHECK(std::abs(h.gains(0) - std::complex<double>(-0.000682785062790845, -0.0005096594241095847)) < 1e-15);
  CHECK(std::abs(h.gains(1) - std::complex<double>(-0.0006974081304679563, -0.000489384800083638)) < 1e-15);
}

TEST_CASE("channel - matches the loop oracle on the reference array") {
  const auto array = build_upa(0.8, 0.4, 1.0, f28);
  const auto el = oracle::elements(array);
  for (const Vec3<double> q : {Vec3<double>(0, 0, 10), Vec3<double>(-2, 1.5, 4), Vec3<double>(0.3, 0, 0.2)}) {
    const auto h = nearfield_los(array, q, 28e9);
    const auto ref = oracle::los(el, {q.x(), q.y(), q.z()}, 28e9);
    double err = 0.0;
    for (std::size_t n = 0; n < ref.size(); ++n) err = std::max(err, std::abs(h.gains(Eigen::Index(n)) - ref[n]) / std::abs(ref[n]));
    CHECK(err < 1e-9);
    CHECK(h.frequency == 28e9);
    CHECK(h.target == q);
  }
}

TEST_CASE("channel - boresight amplitude at 10 m") {
  const auto array = build_upa(0.8, 0.4, 1.0, f28);
  const auto h = nearfield_los(array, Vec3<double>(0, 0, 10), 28e9);
  // Largest amplitude belongs to the elements nearest the axis.
  CHECK(std::abs(h.gains.cwiseAbs().maxCoeff() - 8.520259212923112e-05) < 1e-8);
}

TEST_CASE("channel - amplitude follows inverse distance") {
  const auto array = build_upa(0.1, 0.1, 0.5, f28);
  const Vec3<double> q(0.4, -0.2, 3.0);
  const auto h = nearfield_los(array, q, 28e9);
  for (Eigen::Index n = 0; n < array.size(); ++n) {
    const double d = (array.elements.col(n) - q).norm();
    CHECK(std::abs(std::abs(h.gains(n)) * d - f28.wavelength() / (4.0 * oracle::pi)) < 1e-15);
  }
}

TEST_CASE("channel - rigid rotation leaves the channel unchanged") {
  auto array = build_upa(0.1, 0.05, 0.5, f28);
  const Vec3<double> q(0.3, 0.4, 2.0);
  const auto h = nearfield_los(array, q, 28e9);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(0.7, Vec3<double>(1, 2, 3).normalized()).toRotationMatrix();
  array.elements = r * array.elements;
  const auto g = nearfield_los(array, Vec3<double>(r * q), 28e9);
  CHECK((h.gains - g.gains).norm() / h.gains.norm() < 1e-9);
}

TEST_CASE("channel - target on an element is singular") {
  const auto array = build_upa(0.1, 0.1, 0.5, f28);
  CHECK_THROWS_AS(nearfield_los(array, Vec3<double>(array.elements.col(3)), 28e9), SingularGeometry);
  CHECK_THROWS_AS(nearfield_los(array, Vec3<double>(0, 0, 1), -1.0), InvalidParameter);
}

TEST_CASE("channel - far-field steering vector") {
  const auto array = build_upa(0.8, 0.4, 1.0, f28);
  const Vec3<double> u(0, 0, 1);
  const auto a = farfield_steering(array, u, 10.0, 28e9);
  CHECK((a.gains.cwiseAbs().array() - f28.wavelength() / (40.0 * oracle::pi)).abs().maxCoeff() < 1e-18);
  // Boresight plane wave: every element shares the reference phase.
  const std::complex<double> first = a.gains(0);
  CHECK((a.gains.array() - first).abs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(farfield_steering(array, Vec3<double>(0, 0, 2), 10.0, 28e9), InvalidParameter);
  CHECK_THROWS_AS(farfield_steering(array, u, 0.0, 28e9), InvalidParameter);
}

TEST_CASE("channel - far-field gap at 1000 m") {
  const auto array = build_upa(0.8, 0.4, 1.0, f28);
  const auto h = nearfield_los(array, Vec3<double>(0, 0, 1000), 28e9);
  const auto a = farfield_steering(array, Vec3<double>(0, 0, 1), 1000.0, 28e9);
  // Frozen from the numpy oracle: the corner elements still lag by ~3.3 deg.
  CHECK(std::abs(max_phase_gap(h, a) - 0.05756068904884163) < 1e-7);
}

TEST_CASE("channel - far-field gap shrinks with distance") {
  const auto array = build_upa(0.2, 0.1, 0.5, f28);
  const Vec3<double> u = Vec3<double>(0.3, 0.1, 1.0).normalized();
  double previous = 10.0;
  for (double d : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    const double gap = max_phase_gap(nearfield_los(array, Vec3<double>(d * u), 28e9), farfield_steering(array, u, d, 28e9));
    CHECK(gap < previous);
    previous = gap;
  }
}

TEST_CASE("channel - subcarrier frequencies") {
  const auto f = subcarrier_frequencies(28e9, 1e8, 11);
  REQUIRE(f.size() == 11);
  CHECK(f.front() == 27.95e9);
  CHECK(f.back() == 28.05e9);
  CHECK(f[5] == 28e9);
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(std::abs(f[i] - f[i - 1] - 1e7) < 1e-3);
  CHECK(subcarrier_frequencies(28e9, 1e8, 1) == std::vector<double>{28e9});
  CHECK_THROWS_AS(subcarrier_frequencies(28e9, 1e8, 0), InvalidParameter);
  CHECK_THROWS_AS(subcarrier_frequencies(28e9, -1.0, 3), InvalidParameter);
}

TEST_CASE("channel - wideband entries") {
  const auto array = build_upa(0.1, 0.1, 0.5, f28);
  const Vec3<double> q(0, 0, 2);
  const auto narrow = nearfield_los(array, q, 28e9);
  const auto single = wideband(array, q, 28e9, 0.0, 1);
  REQUIRE(single.size() == 1);
  CHECK(single.subcarriers[0].gains == narrow.gains);
  const auto band = wideband(array, q, 28e9, 1e9, 5);
  REQUIRE(band.size() == 5);
  CHECK(band.subcarriers[2].gains == narrow.gains);
  for (const auto& sc : band.subcarriers) {
    CHECK(sc.gains == nearfield_los(array, q, sc.frequency).gains);
  }
}
