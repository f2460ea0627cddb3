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

#include <algorithm>
#include <cmath>
#include <string_view>

#include "nearfield/types.hpp"

namespace nearfield {

/// Carrier frequency together with its free-space wavelength.
template <typename T>
class Carrier {
public:
  explicit Carrier(T frequency) : frequency_(frequency) {
    detail::require(std::isfinite(frequency) && frequency > T(0),
                    "carrier frequency must be positive and finite");
    wavelength_ = speed_of_light<T> / frequency_;
  }

  T frequency() const { return frequency_; }
  T wavelength() const { return wavelength_; }
  T wavenumber() const { return two_pi<T> / wavelength_; }

  bool operator==(const Carrier&) const = default;

private:
  T frequency_;
  T wavelength_;
};

enum class Plane { xy, xz, yz };

inline std::string_view to_string(Plane plane) {
  switch (plane) {
    case Plane::xy: return "xy";
    case Plane::xz: return "xz";
    case Plane::yz: return "yz";
  }
  return "?";
}

/// Planar array layout.
///
/// Elements are stored column-wise, row-major over the grid: element
/// `iy * grid_x + ix` sits at column `ix` of row `iy`. `aperture` is the
/// largest distance between any two elements.
template <typename T>
struct ArrayGeometry {
  Positions<T> elements;
  Plane plane = Plane::xy;
  Vec3<T> center = Vec3<T>::Zero();
  T aperture = T(0);
  Carrier<T> carrier;
  Eigen::Index grid_x = 1;
  Eigen::Index grid_y = 1;

  Eigen::Index size() const { return elements.cols(); }
  T wavelength() const { return carrier.wavelength(); }
};

enum class Region { reactive_near_field, radiating_near_field, far_field };

inline std::string_view to_string(Region region) {
  switch (region) {
    case Region::reactive_near_field: return "reactive-near-field";
    case Region::radiating_near_field: return "radiating-near-field";
    case Region::far_field: return "far-field";
  }
  return "?";
}

template <typename T>
struct RegionClass {
  Region label;
  T fraunhofer_distance;
  T reactive_bound;
  T distance;  // from the array center
};

/// Uniform planar array in the xy-plane centered on `center`.
///
/// Each side holds floor(side / pitch) + 1 elements with pitch
/// `spacing * wavelength`, i.e. the densest grid that fits inside the
/// nominal side lengths.
template <typename T>
ArrayGeometry<T> build_upa(T length, T width, T spacing, const Carrier<T>& carrier,
                           const Vec3<T>& center = Vec3<T>::Zero()) {
  detail::require(std::isfinite(length) && length >= T(0), "array length must be finite and >= 0");
  detail::require(std::isfinite(width) && width >= T(0), "array width must be finite and >= 0");
  detail::require(std::isfinite(spacing) && spacing > T(0), "element spacing must be finite and > 0");
  detail::require(center.allFinite(), "array center must be finite");

  const T pitch = spacing * carrier.wavelength();
  // Tolerate side lengths that are an exact multiple of the pitch up to rounding.
  auto count = [pitch](T side) {
    return static_cast<Eigen::Index>(std::floor(side / pitch * (T(1) + T(1e-9)))) + 1;
  };
  const Eigen::Index nx = count(length);
  const Eigen::Index ny = count(width);

  ArrayGeometry<T> array{Positions<T>(3, nx * ny), Plane::xy, center, T(0), carrier, nx, ny};
  const T half_x = T(nx - 1) / T(2);
  const T half_y = T(ny - 1) / T(2);
  for (Eigen::Index iy = 0; iy < ny; ++iy) {
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      array.elements.col(iy * nx + ix) =
          center + Vec3<T>((T(ix) - half_x) * pitch, (T(iy) - half_y) * pitch, T(0));
    }
  }
  array.aperture = pitch * std::hypot(T(nx - 1), T(ny - 1));
  return array;
}

/// 2 D^2 / lambda.
template <typename T>
T fraunhofer_distance(T aperture, const Carrier<T>& carrier) {
  detail::require(std::isfinite(aperture) && aperture >= T(0), "aperture must be finite and >= 0");
  return T(2) * aperture * aperture / carrier.wavelength();
}

// 0.62 sqrt(D^3 / lambda), capped at the Fraunhofer distance so the two
// bounds stay ordered for sub-wavelength apertures.
template <typename T>
T reactive_bound(T aperture, const Carrier<T>& carrier) {
  const T far = fraunhofer_distance(aperture, carrier);
  const T reactive = T(0.62) * std::sqrt(aperture * aperture * aperture / carrier.wavelength());
  return std::min(reactive, far);
}

namespace detail {

template <typename T>
void check_off_elements(const Positions<T>& elements, const Vec3<T>& point) {
  require(point.allFinite(), "query point must be finite");
  const T closest = (elements.colwise() - point).colwise().norm().minCoeff();
  if (!(closest > T(1e-9))) {
    throw SingularGeometry("query point coincides with an array element");
  }
}

}  // namespace detail

/// Region of a point at `distance` from the center of an array with the
/// given aperture.
template <typename T>
RegionClass<T> classify_distance(T distance, T aperture, const Carrier<T>& carrier) {
  detail::require(std::isfinite(distance) && distance >= T(0), "distance must be finite and >= 0");
  const T far = fraunhofer_distance(aperture, carrier);
  const T reactive = reactive_bound(aperture, carrier);
  Region label = Region::radiating_near_field;
  if (distance > far) {
    label = Region::far_field;
  } else if (distance < reactive) {
    label = Region::reactive_near_field;
  }
  return {label, far, reactive, distance};
}

template <typename T>
RegionClass<T> classify_point(const ArrayGeometry<T>& array, const Vec3<T>& point) {
  detail::check_off_elements(array.elements, point);
  return classify_distance((point - array.center).norm(), array.aperture, array.carrier);
}

/// Largest phase error (radians) of the plane-wave approximation over the
/// array, for a point observed from the array center.
///
/// Per element, the exact path length |point - p_n| is compared with its
/// first-order expansion d - (p_n - center) . u, where d and u are the
/// distance and unit direction from the center to `point`.
template <typename T>
T max_phase_deviation(const ArrayGeometry<T>& array, const Vec3<T>& point) {
  detail::check_off_elements(array.elements, point);
  const Vec3<T> offset = point - array.center;
  const T distance = offset.norm();
  detail::require(distance > T(0), "phase deviation is undefined at the array center");
  const Vec3<T> direction = offset / distance;

  const Positions<T> relative = array.elements.colwise() - array.center;
  const RVector<T> exact = (array.elements.colwise() - point).colwise().norm().transpose();
  const RVector<T> planar = (distance - (direction.transpose() * relative).array()).transpose();
  return array.carrier.wavenumber() * (exact - planar).cwiseAbs().maxCoeff();
}

}  // namespace nearfield
