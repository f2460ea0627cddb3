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

#include <vector>

#include "nearfield/types.hpp"

namespace nearfield {

/// Transmit weights, one column per user stream (rows follow element order).
template <typename T>
struct Precoder {
  CMatrix<T> columns;
  T total_power = T(0);  // budget

  Eigen::Index num_elements() const { return columns.rows(); }
  Eigen::Index num_streams() const { return columns.cols(); }
  T power_used() const { return columns.squaredNorm(); }
  auto column(Eigen::Index k) const { return columns.col(k); }
};

struct OptimizerReport {
  int iterations = 0;
  std::vector<double> sum_rate_trace;  // bits/s/Hz, entry 0 is the initial point
  bool converged = false;
  double tolerance = 0.0;
};

}  // namespace nearfield
