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

#include "nearfield/channel.hpp"
#include "nearfield/precoder.hpp"

namespace nearfield {

template <typename T>
T dbm_to_watts(T dbm) {
  return std::pow(T(10), (dbm - T(30)) / T(10));
}

template <typename T>
T watts_to_dbm(T watts) {
  return T(10) * std::log10(watts) + T(30);
}

/// Transmit power and receiver noise floor. noise_power() is
/// noise_psd() * bandwidth().
template <typename T>
class LinkBudget {
public:
  LinkBudget(T transmit_power, T noise_psd, T bandwidth)
      : transmit_power_(transmit_power), noise_psd_(noise_psd), bandwidth_(bandwidth) {
    detail::require(std::isfinite(transmit_power) && transmit_power > T(0), "transmit power must be > 0");
    detail::require(std::isfinite(noise_psd) && noise_psd > T(0), "noise spectral density must be > 0");
    detail::require(std::isfinite(bandwidth) && bandwidth > T(0), "bandwidth must be > 0");
    noise_power_ = noise_psd_ * bandwidth_;
  }

  static LinkBudget from_dbm(T power_dbm, T noise_psd_dbm_hz, T bandwidth) {
    return LinkBudget(dbm_to_watts(power_dbm), dbm_to_watts(noise_psd_dbm_hz), bandwidth);
  }

  T transmit_power() const { return transmit_power_; }
  T noise_psd() const { return noise_psd_; }
  T bandwidth() const { return bandwidth_; }
  T noise_power() const { return noise_power_; }

private:
  T transmit_power_;
  T noise_psd_;
  T bandwidth_;
  T noise_power_;
};

/// |sum_n h_n w_n|^2. Conjugate focusing (w ~ conj(h)) aligns every term.
template <typename T, typename Derived>
T received_power(const ChannelVector<T>& channel, const Eigen::MatrixBase<Derived>& column) {
  detail::require(column.size() == channel.size(), "weight vector length does not match the channel");
  return std::norm(channel.gains.cwiseProduct(column.derived()).sum());
}

/// E(k, j) = h_k^T w_j for every user k and stream j.
template <typename T>
CMatrix<T> effective_gains(const std::vector<ChannelVector<T>>& channels, const Precoder<T>& precoder) {
  const Eigen::Index k = static_cast<Eigen::Index>(channels.size());
  CMatrix<T> stacked(precoder.num_elements(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    detail::require(channels[i].size() == precoder.num_elements(),
                    "channel length does not match the precoder");
    stacked.col(i) = channels[i].gains;
  }
  return stacked.transpose() * precoder.columns;
}

namespace detail {

template <typename T>
T sinr_from_gains(const CMatrix<T>& effective, Eigen::Index user, T noise_power) {
  const T signal = std::norm(effective(user, user));
  const T interference = effective.row(user).cwiseAbs2().sum() - signal;
  return signal / (std::max(interference, T(0)) + noise_power);
}

template <typename T>
T sum_rate_from_gains(const CMatrix<T>& effective, T noise_power) {
  T rate = T(0);
  for (Eigen::Index k = 0; k < effective.rows(); ++k) {
    rate += std::log2(T(1) + sinr_from_gains(effective, k, noise_power));
  }
  return rate;
}

}  // namespace detail

/// |h_k w_k|^2 / (sum_{j != k} |h_k w_j|^2 + noise).
template <typename T>
T sinr(const std::vector<ChannelVector<T>>& channels, const Precoder<T>& precoder, Eigen::Index user,
       T noise_power) {
  detail::require(static_cast<Eigen::Index>(channels.size()) == precoder.num_streams(),
                  "one channel per precoder column is required");
  if (user < 0 || user >= precoder.num_streams()) {
    throw std::out_of_range("user index out of range");
  }
  detail::require(noise_power > T(0), "noise power must be > 0");
  return detail::sinr_from_gains(effective_gains(channels, precoder), user, noise_power);
}

template <typename T>
T spectral_efficiency(T sinr_value) {
  detail::require(sinr_value >= T(0), "SINR must be non-negative");
  return std::log2(T(1) + sinr_value);
}

template <typename T>
T sum_rate(const std::vector<ChannelVector<T>>& channels, const Precoder<T>& precoder, T noise_power) {
  detail::require(static_cast<Eigen::Index>(channels.size()) == precoder.num_streams(),
                  "one channel per precoder column is required");
  detail::require(noise_power > T(0), "noise power must be > 0");
  return detail::sum_rate_from_gains(effective_gains(channels, precoder), noise_power);
}

/// |h . w|^2 / (|h|^2 |w|^2): fraction of the matched-filter power a
/// weight vector delivers at the channel's point. 1 iff w ~ conj(h).
template <typename T, typename Derived>
T focusing_efficiency(const ChannelVector<T>& channel, const Eigen::MatrixBase<Derived>& column) {
  const T denominator = channel.gains.squaredNorm() * column.squaredNorm();
  detail::require(denominator > T(0), "focusing efficiency needs nonzero channel and weights");
  return std::min(T(1), received_power(channel, column) / denominator);
}

// ----- Planar field scans -------------------------------------------------

template <typename T>
struct ScanSpec {
  Plane plane = Plane::xz;
  T u_min = T(0), u_max = T(1);  // first in-plane axis (x for xy/xz, y for yz)
  T v_min = T(0), v_max = T(1);  // second in-plane axis (y for xy, z for xz/yz)
  Eigen::Index u_points = 2;
  Eigen::Index v_points = 2;
  T offset = T(0);  // coordinate along the plane normal

  T u_at(Eigen::Index i) const { return u_min + (u_max - u_min) * T(i) / T(u_points - 1); }
  T v_at(Eigen::Index j) const { return v_min + (v_max - v_min) * T(j) / T(v_points - 1); }
  T u_step() const { return (u_max - u_min) / T(u_points - 1); }
  T v_step() const { return (v_max - v_min) / T(v_points - 1); }

  Vec3<T> point(Eigen::Index i, Eigen::Index j) const {
    const T u = u_at(i);
    const T v = v_at(j);
    switch (plane) {
      case Plane::xy: return {u, v, offset};
      case Plane::xz: return {u, offset, v};
      case Plane::yz: return {offset, u, v};
    }
    return {u, v, offset};
  }
};

template <typename T>
using Grid = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Received power over a plane, indexed (u, v). Samples inside the
/// one-wavelength guard sphere of any element are flagged invalid and hold 0.
template <typename T>
struct FieldScan {
  ScanSpec<T> spec;
  T frequency = T(0);
  Grid<T> values;      // watts
  Grid<T> normalized;  // values / max(values)
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
  T peak = T(0);
  Eigen::Index peak_u = 0;
  Eigen::Index peak_v = 0;

  Vec3<T> peak_point() const { return spec.point(peak_u, peak_v); }
};

namespace detail {

template <typename T>
struct PointResponse {
  std::complex<T> field;  // sum_n h_n w_n
  T channel_energy;       // sum_n |h_n|^2
  T closest;              // distance to the nearest element
};

// Line-of-sight response of a weight vector at one point, without building
// the ChannelVector. Same arithmetic as nearfield_los + received_power.
template <typename T>
PointResponse<T> los_response(const Positions<T>& elements, const RVector<T>& weight_re,
                              const RVector<T>& weight_im, const Vec3<T>& point, T wavelength) {
  const Eigen::Array<T, Eigen::Dynamic, 1> distance =
      (elements.colwise() - point).colwise().norm().transpose().array();
  const Eigen::Array<T, Eigen::Dynamic, 1> amplitude = (wavelength / (T(4) * pi<T>)) / distance;
  const Eigen::Array<T, Eigen::Dynamic, 1> phase = (two_pi<T> / wavelength) * distance;
  const Eigen::Array<T, Eigen::Dynamic, 1> c = phase.cos();
  const Eigen::Array<T, Eigen::Dynamic, 1> s = phase.sin();
  // (a e^{-i phi}) (wr + i wi) = a [(wr cos + wi sin) + i (wi cos - wr sin)]
  const T re = (amplitude * (weight_re.array() * c + weight_im.array() * s)).sum();
  const T im = (amplitude * (weight_im.array() * c - weight_re.array() * s)).sum();
  return {{re, im}, amplitude.square().sum(), distance.minCoeff()};
}

}  // namespace detail

template <typename T, typename Derived>
FieldScan<T> field_scan(const ArrayGeometry<T>& array, const Eigen::MatrixBase<Derived>& column,
                        const ScanSpec<T>& spec, T frequency) {
  detail::require(column.size() == array.size(), "weight vector length does not match the array");
  detail::require(spec.u_points >= 2 && spec.v_points >= 2, "scan resolution must be >= 2 per axis");
  detail::require(std::isfinite(spec.u_min) && std::isfinite(spec.u_max) && spec.u_min < spec.u_max,
                  "scan u-range must be finite and increasing");
  detail::require(std::isfinite(spec.v_min) && std::isfinite(spec.v_max) && spec.v_min < spec.v_max,
                  "scan v-range must be finite and increasing");
  detail::require(std::isfinite(frequency) && frequency > T(0), "frequency must be positive and finite");

  const T wavelength = speed_of_light<T> / frequency;
  const RVector<T> weight_re = column.real();
  const RVector<T> weight_im = column.imag();

  FieldScan<T> scan;
  scan.spec = spec;
  scan.frequency = frequency;
  scan.values = Grid<T>::Zero(spec.u_points, spec.v_points);
  scan.valid.setConstant(spec.u_points, spec.v_points, true);

  // Cells are independent; each is written exactly once.
  for (Eigen::Index j = 0; j < spec.v_points; ++j) {
    for (Eigen::Index i = 0; i < spec.u_points; ++i) {
      const auto response =
          detail::los_response(array.elements, weight_re, weight_im, spec.point(i, j), wavelength);
      if (response.closest < wavelength) {
        scan.valid(i, j) = false;
        continue;
      }
      scan.values(i, j) = std::norm(response.field);
    }
  }

  scan.peak = scan.values.maxCoeff(&scan.peak_u, &scan.peak_v);
  scan.normalized = scan.peak > T(0) ? Grid<T>(scan.values / scan.peak)
                                     : Grid<T>(Grid<T>::Zero(spec.u_points, spec.v_points));
  return scan;
}

// ----- Wideband focal drift ------------------------------------------------

/// Search segment origin + s * direction, s in [min_depth, max_depth].
template <typename T>
struct DepthSearch {
  Vec3<T> origin = Vec3<T>::Zero();
  Vec3<T> direction = Vec3<T>::UnitZ();
  T min_depth = T(0);
  T max_depth = T(0);
  T design_depth = T(0);
  T resolution = T(0.01);
};

template <typename T>
struct FocalDriftSample {
  T frequency;
  T peak_depth;
  T drift;  // peak_depth - design_depth
};

/// Depth at which each subcarrier's beam focuses along a line.
///
/// The focus of subcarrier f is where its element contributions add most
/// coherently, i.e. the maximizer of |h_f(q) . w|^2 / |h_f(q)|^2. A dense
/// grid at `resolution` brackets the peak, golden-section search refines it.
template <typename T, typename Derived>
std::vector<FocalDriftSample<T>> focal_drift(const ArrayGeometry<T>& array, const WidebandChannel<T>& band,
                                             const Eigen::MatrixBase<Derived>& flat_column,
                                             const DepthSearch<T>& search) {
  detail::require(flat_column.size() == array.size(), "weight vector length does not match the array");
  detail::require(std::isfinite(search.min_depth) && std::isfinite(search.max_depth) &&
                      search.min_depth < search.max_depth,
                  "focal search range is empty");
  detail::require(search.design_depth >= search.min_depth && search.design_depth <= search.max_depth,
                  "focal search range must bracket the design depth");
  detail::require(search.resolution > T(0) && search.resolution <= T(0.01),
                  "focal search resolution must be in (0, 1 cm]");
  detail::require(std::abs(search.direction.norm() - T(1)) <= T(1e-9), "search direction must be a unit vector");

  const RVector<T> weight_re = flat_column.real();
  const RVector<T> weight_im = flat_column.imag();
  const auto steps = static_cast<Eigen::Index>(
      std::ceil((search.max_depth - search.min_depth) / search.resolution));
  const T step = (search.max_depth - search.min_depth) / T(steps);

  std::vector<FocalDriftSample<T>> drift;
  drift.reserve(band.size());
  for (const auto& subcarrier : band.subcarriers) {
    const T wavelength = subcarrier.wavelength();
    auto gain = [&](T depth) {
      const Vec3<T> point = search.origin + depth * search.direction;
      const auto response = detail::los_response(array.elements, weight_re, weight_im, point, wavelength);
      if (!(response.closest > T(1e-9))) {
        return T(0);
      }
      return std::norm(response.field) / response.channel_energy;
    };

    Eigen::Index best = 0;
    T best_gain = -T(1);
    for (Eigen::Index i = 0; i <= steps; ++i) {
      const T g = gain(search.min_depth + T(i) * step);
      if (g > best_gain) {
        best_gain = g;
        best = i;
      }
    }

    T lo = search.min_depth + T(std::max<Eigen::Index>(best - 1, 0)) * step;
    T hi = search.min_depth + T(std::min(best + 1, steps)) * step;
    const T ratio = (std::sqrt(T(5)) - T(1)) / T(2);
    T a = hi - ratio * (hi - lo);
    T b = lo + ratio * (hi - lo);
    T ga = gain(a);
    T gb = gain(b);
    for (int it = 0; it < 80 && hi - lo > T(1e-9); ++it) {
      if (ga < gb) {
        lo = a;
        a = b;
        ga = gb;
        b = lo + ratio * (hi - lo);
        gb = gain(b);
      } else {
        hi = b;
        b = a;
        gb = ga;
        a = hi - ratio * (hi - lo);
        ga = gain(a);
      }
    }
    T peak = (lo + hi) / T(2);
    if (gain(peak) < best_gain) {
      peak = search.min_depth + T(best) * step;
    }
    drift.push_back({subcarrier.frequency, peak, peak - search.design_depth});
  }
  return drift;
}

}  // namespace nearfield
