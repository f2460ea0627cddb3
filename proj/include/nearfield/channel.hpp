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

#include <cmath>
#include <vector>

#include "nearfield/geometry.hpp"

namespace nearfield {

/// Per-element complex voltage gain from the array to one point at one
/// frequency. `gains(n)` follows the element order of the ArrayGeometry.
template <typename T>
struct ChannelVector {
  CVector<T> gains;
  T frequency = T(0);
  Vec3<T> target = Vec3<T>::Zero();

  Eigen::Index size() const { return gains.size(); }
  T wavelength() const { return speed_of_light<T> / frequency; }
};

template <typename T>
struct WidebandChannel {
  std::vector<ChannelVector<T>> subcarriers;
  T center_frequency = T(0);
  T bandwidth = T(0);

  std::size_t size() const { return subcarriers.size(); }
};

namespace detail {

// Fill gains(n) = amplitude(n) * exp(-i * phase(n)).
template <typename T>
CVector<T> polar_gains(const RVector<T>& amplitude, const RVector<T>& phase) {
  CVector<T> gains(amplitude.size());
  gains.real() = amplitude.array() * phase.array().cos();
  gains.imag() = -amplitude.array() * phase.array().sin();
  return gains;
}

}  // namespace detail

/// Exact spherical-wavefront line-of-sight channel.
///
/// gains(n) = lambda / (4 pi d_n) * exp(-i 2 pi d_n / lambda), with d_n the
/// exact distance from element n to `target`.
template <typename T>
ChannelVector<T> nearfield_los(const ArrayGeometry<T>& array, const Vec3<T>& target, T frequency) {
  detail::require(std::isfinite(frequency) && frequency > T(0), "frequency must be positive and finite");
  detail::check_off_elements(array.elements, target);

  const T wavelength = speed_of_light<T> / frequency;
  const RVector<T> distance = (array.elements.colwise() - target).colwise().norm().transpose();
  const RVector<T> amplitude = (wavelength / (T(4) * pi<T>)) * distance.array().inverse();
  const RVector<T> phase = (two_pi<T> / wavelength) * distance;
  return {detail::polar_gains<T>(amplitude, phase), frequency, target};
}

/// Plane-wave steering vector with a common free-space gain at
/// `reference_distance`; the phase is linear in element position.
template <typename T>
ChannelVector<T> farfield_steering(const ArrayGeometry<T>& array, const Vec3<T>& direction,
                                   T reference_distance, T frequency) {
  detail::require(direction.allFinite() && std::abs(direction.norm() - T(1)) <= T(1e-9),
                  "steering direction must be a unit vector");
  detail::require(std::isfinite(reference_distance) && reference_distance > T(0),
                  "reference distance must be positive");
  detail::require(std::isfinite(frequency) && frequency > T(0), "frequency must be positive and finite");

  const T wavelength = speed_of_light<T> / frequency;
  const Eigen::Index n = array.size();
  const RVector<T> projection =
      (direction.transpose() * (array.elements.colwise() - array.center)).transpose();
  const RVector<T> amplitude =
      RVector<T>::Constant(n, wavelength / (T(4) * pi<T> * reference_distance));
  const RVector<T> phase =
      (two_pi<T> / wavelength) * (RVector<T>::Constant(n, reference_distance) - projection);
  return {detail::polar_gains<T>(amplitude, phase), frequency,
          Vec3<T>(array.center + reference_distance * direction)};
}

/// `count` frequencies evenly spread over [center - B/2, center + B/2]; the
/// middle entry of an odd count is exactly `center`.
template <typename T>
std::vector<T> subcarrier_frequencies(T center, T bandwidth, Eigen::Index count) {
  detail::require(count >= 1, "at least one subcarrier is required");
  detail::require(std::isfinite(bandwidth) && bandwidth >= T(0), "bandwidth must be finite and >= 0");
  std::vector<T> frequencies(static_cast<std::size_t>(count), center);
  if (count == 1) {
    return frequencies;
  }
  const T step = bandwidth / T(count - 1);
  const T mid = T(count - 1) / T(2);
  for (Eigen::Index i = 0; i < count; ++i) {
    frequencies[static_cast<std::size_t>(i)] = center + (T(i) - mid) * step;
  }
  return frequencies;
}

template <typename T>
WidebandChannel<T> wideband(const ArrayGeometry<T>& array, const Vec3<T>& target, T center,
                            T bandwidth, Eigen::Index n_subcarriers) {
  WidebandChannel<T> band{{}, center, bandwidth};
  for (T frequency : subcarrier_frequencies(center, bandwidth, n_subcarriers)) {
    band.subcarriers.push_back(nearfield_los(array, target, frequency));
  }
  return band;
}

}  // namespace nearfield
