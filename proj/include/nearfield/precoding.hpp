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
#include <limits>
#include <vector>

#include <Eigen/LU>

#include "nearfield/metrics.hpp"

namespace nearfield {

/// Maximum-ratio (conjugate) focusing: w = sqrt(P) conj(h) / |h|.
///
/// Every element term h_n w_n then has the same phase, so h . w equals
/// sqrt(P) |h| and the received power P |h|^2 is the largest any weight
/// vector with |w|^2 = P can deliver at the channel's point.
template <typename T>
Precoder<T> conjugate_focus(const ChannelVector<T>& channel, T power) {
  detail::require(std::isfinite(power) && power > T(0), "transmit power must be > 0");
  const T norm = channel.gains.norm();
  if (!(norm > T(0)) || !std::isfinite(norm)) {
    throw DegenerateChannel("cannot focus on an all-zero channel");
  }
  Precoder<T> precoder{CMatrix<T>(channel.size(), 1), power};
  precoder.columns.col(0) = (std::sqrt(power) / norm) * channel.gains.conjugate();
  return precoder;
}

/// Far-field beam steering: conjugate focusing on the plane-wave model.
template <typename T>
Precoder<T> steer(const ArrayGeometry<T>& array, const Vec3<T>& direction, T reference_distance, T frequency,
                  T power) {
  return conjugate_focus(farfield_steering(array, direction, reference_distance, frequency), power);
}

/// Weights designed at the band center and applied unchanged on every
/// subcarrier, as frequency-flat phase shifters would.
template <typename T>
Precoder<T> frequency_flat_focus(const ChannelVector<T>& channel_at_center, T power) {
  return conjugate_focus(channel_at_center, power);
}

namespace detail {

// Rotate each column so its first nonzero weight is real and positive.
template <typename T>
void fix_global_phase(CMatrix<T>& columns) {
  for (Eigen::Index k = 0; k < columns.cols(); ++k) {
    for (Eigen::Index n = 0; n < columns.rows(); ++n) {
      const T magnitude = std::abs(columns(n, k));
      if (magnitude > T(0)) {
        columns.col(k) *= std::conj(columns(n, k)) / magnitude;
        break;
      }
    }
  }
}

template <typename T>
CMatrix<T> stack_channels(const std::vector<ChannelVector<T>>& channels) {
  require(!channels.empty(), "at least one channel is required");
  const Eigen::Index n = channels.front().size();
  require(n > 0, "channels must not be empty");
  CMatrix<T> stacked(n, static_cast<Eigen::Index>(channels.size()));
  for (std::size_t k = 0; k < channels.size(); ++k) {
    require(channels[k].size() == n, "all channels must have the same length");
    stacked.col(static_cast<Eigen::Index>(k)) = channels[k].gains;
  }
  return stacked;
}

}  // namespace detail

template <typename T>
struct SumRateOptions {
  T tolerance = T(1e-5);  // bits/s/Hz
  int max_iterations = 500;
};

template <typename T>
struct SumRateResult {
  Precoder<T> precoder;
  OptimizerReport report;
};

/// Multi-user sum-rate maximizing precoder (weighted-MMSE iterations).
///
/// Starts from equal-power conjugate focusing. Each iteration computes the
/// MMSE receive scalars u_k and MSE weights omega_k = 1 / e_k, then solves
/// the weighted transmit problem
///
///     w_k = omega_k conj(u_k) (sum_j omega_j |u_j|^2 a_j a_j^H + mu I)^-1 a_k,
///
/// with a_k = conj(h_k). The inverse is applied in the K-dimensional span of
/// the channels, W = A (D G + mu I)^-1 B with G = A^H A, so the cost per
/// iteration is O(N K^2). mu >= 0 is found by bisection to respect the power
/// budget, after which W is rescaled to use the whole budget; scaling all
/// streams up never lowers any SINR. Each iteration therefore cannot lower the
/// sum rate; a step that loses rate to rounding ends the run instead.
template <typename T>
SumRateResult<T> sum_rate_precoder(const std::vector<ChannelVector<T>>& channels, T power, T noise_power,
                                   const SumRateOptions<T>& options = {}) {
  detail::require(std::isfinite(power) && power > T(0), "transmit power must be > 0");
  detail::require(std::isfinite(noise_power) && noise_power > T(0), "noise power must be > 0");
  detail::require(options.tolerance >= T(0) && options.max_iterations >= 0, "invalid optimizer options");

  using Complex = std::complex<T>;
  const CMatrix<T> h = detail::stack_channels(channels);
  const Eigen::Index users = h.cols();
  const CMatrix<T> a = h.conjugate();
  const CMatrix<T> gram = a.adjoint() * a;

  CMatrix<T> w(h.rows(), users);
  for (Eigen::Index k = 0; k < users; ++k) {
    const T norm = h.col(k).norm();
    if (!(norm > T(0))) {
      throw DegenerateChannel("cannot serve a user with an all-zero channel");
    }
    w.col(k) = (std::sqrt(power / T(users)) / norm) * a.col(k);
  }

  auto rate_of = [&](const CMatrix<T>& weights) {
    return detail::sum_rate_from_gains<T>(h.transpose() * weights, noise_power);
  };
  auto rescale = [&](CMatrix<T>& weights) {
    const T used = weights.squaredNorm();
    if (used > T(0)) {
      weights *= std::sqrt(power / used);
    }
  };

  OptimizerReport report;
  report.tolerance = static_cast<double>(options.tolerance);
  T rate = rate_of(w);
  report.sum_rate_trace.push_back(static_cast<double>(rate));

  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    const CMatrix<T> effective = h.transpose() * w;
    RVector<T> mse_weight(users);
    CVector<T> receive(users);
    for (Eigen::Index k = 0; k < users; ++k) {
      const T total = effective.row(k).cwiseAbs2().sum() + noise_power;
      receive(k) = std::conj(effective(k, k)) / total;
      const T mse = std::max(T(1) - std::norm(effective(k, k)) / total, std::numeric_limits<T>::min());
      mse_weight(k) = T(1) / mse;
    }
    const CVector<T> d = (mse_weight.array() * receive.cwiseAbs2().array()).matrix().template cast<Complex>();
    const CVector<T> b = (mse_weight.template cast<Complex>().array() * receive.conjugate().array()).matrix();
    const CMatrix<T> dg = d.asDiagonal() * gram;

    auto transmit = [&](T mu) -> CMatrix<T> {
      CMatrix<T> system = dg;
      system.diagonal().array() += Complex(mu, T(0));
      Eigen::FullPivLU<CMatrix<T>> lu(system);
      if (!lu.isInvertible()) {
        return CMatrix<T>();
      }
      return a * lu.solve(CMatrix<T>(b.asDiagonal()));
    };

    CMatrix<T> next = transmit(T(0));
    if (next.size() == 0 || !next.allFinite() || next.squaredNorm() > power) {
      T hi = std::max(dg.norm(), std::numeric_limits<T>::min());
      for (int guard = 0; guard < 2000; ++guard) {
        next = transmit(hi);
        if (next.size() != 0 && next.allFinite() && next.squaredNorm() <= power) {
          break;
        }
        hi *= T(2);
      }
      T lo = T(0);
      for (int bisect = 0; bisect < 200 && hi - lo > hi * std::numeric_limits<T>::epsilon() * T(4); ++bisect) {
        const T mid = T(0.5) * (lo + hi);
        const CMatrix<T> candidate = transmit(mid);
        if (candidate.size() != 0 && candidate.allFinite() && candidate.squaredNorm() <= power) {
          hi = mid;
          next = candidate;
        } else {
          lo = mid;
        }
      }
    }
    if (next.size() == 0 || !next.allFinite()) {
      report.converged = true;
      break;
    }
    rescale(next);

    const T next_rate = rate_of(next);
    report.iterations = iteration + 1;
    if (!(next_rate >= rate)) {
      report.converged = true;
      break;
    }
    const T improvement = next_rate - rate;
    w = std::move(next);
    rate = next_rate;
    report.sum_rate_trace.push_back(static_cast<double>(rate));
    if (improvement < options.tolerance) {
      report.converged = true;
      break;
    }
  }

  detail::fix_global_phase(w);
  return {Precoder<T>{std::move(w), power}, std::move(report)};
}

/// Sum-rate power split over fixed unit-norm beams (one column per user).
///
/// Used for the far-field steering baseline, whose beam shapes are fixed by
/// the steering vectors and only the per-user power is free. Pairwise
/// transfers are searched on a dense grid and refined by golden section
/// until no transfer improves the sum rate; single-user allocations are
/// always compared as candidates.
template <typename T>
Precoder<T> allocate_beam_power(const std::vector<ChannelVector<T>>& channels, const CMatrix<T>& beams, T power,
                                T noise_power) {
  detail::require(std::isfinite(power) && power > T(0), "transmit power must be > 0");
  detail::require(std::isfinite(noise_power) && noise_power > T(0), "noise power must be > 0");
  const CMatrix<T> h = detail::stack_channels(channels);
  const Eigen::Index users = h.cols();
  detail::require(beams.rows() == h.rows() && beams.cols() == users, "one beam per user is required");

  CMatrix<T> unit = beams;
  for (Eigen::Index k = 0; k < users; ++k) {
    const T norm = unit.col(k).norm();
    detail::require(norm > T(0), "beams must be nonzero");
    unit.col(k) /= norm;
  }
  // coupling(k, j) = |h_k . b_j|^2
  const Grid<T> coupling = (h.transpose() * unit).cwiseAbs2();

  auto rate_of = [&](const RVector<T>& p) {
    T rate = T(0);
    for (Eigen::Index k = 0; k < users; ++k) {
      const T signal = p(k) * coupling(k, k);
      const T interference = coupling.row(k).dot(p) - signal;
      rate += std::log2(T(1) + signal / (std::max(interference, T(0)) + noise_power));
    }
    return rate;
  };

  RVector<T> best = RVector<T>::Constant(users, power / T(users));
  T best_rate = rate_of(best);
  constexpr int grid = 400;
  for (int sweep = 0; sweep < 100; ++sweep) {
    const T before = best_rate;
    for (Eigen::Index i = 0; i < users; ++i) {
      for (Eigen::Index j = i + 1; j < users; ++j) {
        const T pool = best(i) + best(j);
        auto with_share = [&](T share) {
          RVector<T> p = best;
          p(i) = share;
          p(j) = pool - share;
          return p;
        };
        int arg = 0;
        T arg_rate = -std::numeric_limits<T>::infinity();
        for (int s = 0; s <= grid; ++s) {
          const T r = rate_of(with_share(pool * T(s) / T(grid)));
          if (r > arg_rate) {
            arg_rate = r;
            arg = s;
          }
        }
        T lo = pool * T(std::max(arg - 1, 0)) / T(grid);
        T hi = pool * T(std::min(arg + 1, grid)) / T(grid);
        const T ratio = (std::sqrt(T(5)) - T(1)) / T(2);
        for (int it = 0; it < 60; ++it) {
          const T x1 = hi - ratio * (hi - lo);
          const T x2 = lo + ratio * (hi - lo);
          if (rate_of(with_share(x1)) < rate_of(with_share(x2))) {
            lo = x1;
          } else {
            hi = x2;
          }
        }
        for (T share : {pool * T(arg) / T(grid), T(0.5) * (lo + hi)}) {
          const RVector<T> p = with_share(share);
          const T r = rate_of(p);
          if (r > best_rate) {
            best_rate = r;
            best = p;
          }
        }
      }
    }
    if (!(best_rate > before + T(1e-12))) {
      break;
    }
  }
  for (Eigen::Index k = 0; k < users; ++k) {
    RVector<T> single = RVector<T>::Zero(users);
    single(k) = power;
    const T r = rate_of(single);
    if (r > best_rate) {
      best_rate = r;
      best = single;
    }
  }

  Precoder<T> precoder{CMatrix<T>(h.rows(), users), power};
  for (Eigen::Index k = 0; k < users; ++k) {
    precoder.columns.col(k) = std::sqrt(best(k)) * unit.col(k);
  }
  return precoder;
}

}  // namespace nearfield
