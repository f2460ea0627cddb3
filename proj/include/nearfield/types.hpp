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
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nearfield {

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

// One column per element, (x, y, z) in meters.
template <typename T>
using Positions = Eigen::Matrix<T, 3, Eigen::Dynamic>;

template <typename T>
using CVector = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;

template <typename T>
using CMatrix = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using RVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <typename T>
inline constexpr T speed_of_light = T(299792458.0);

template <typename T>
inline constexpr T pi = std::numbers::pi_v<T>;

template <typename T>
inline constexpr T two_pi = T(2) * std::numbers::pi_v<T>;

class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A query point coincides with a radiating element.
class SingularGeometry : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Channel with no usable gain (all-zero).
class DegenerateChannel : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw InvalidParameter(message);
  }
}

// Wrap an angle to (-pi, pi].
template <typename T>
inline T wrap_phase(T angle) {
  T wrapped = std::remainder(angle, two_pi<T>);
  if (wrapped <= -pi<T>) {
    wrapped += two_pi<T>;
  }
  return wrapped;
}

}  // namespace detail

}  // namespace nearfield
