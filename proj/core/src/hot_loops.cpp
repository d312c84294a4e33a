// Copyright 2026 The mmdbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hot_loops.hpp"

#include <cmath>
#include <algorithm>

namespace mmdbayes::detail {

double gaussian_sum_1d(const double* x, Index n, double y, double inv_gamma2) noexcept {
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double diff = x[i] - y;
    acc += std::exp(-diff * diff * inv_gamma2);
  }
  return acc;
}

double gaussian_sum(const double* x, Index n, Index d, const double* y, double inv_gamma2) noexcept {
  constexpr Index kChunk = 256;
  double buf[kChunk];
  double acc = 0.0;
  for (Index start = 0; start < n; start += kChunk) {
    const Index len = std::min(kChunk, n - start);
    for (Index i = 0; i < len; ++i) {
      const double* row = x + (start + i) * d;
      double s = 0.0;
      for (Index j = 0; j < d; ++j) {
        const double diff = row[j] - y[j];
        s += diff * diff;
      }
      buf[i] = -s * inv_gamma2;
    }
    for (Index i = 0; i < len; ++i) acc += std::exp(buf[i]);
  }
  return acc;
}

double uniform_edge_sum(const double* x, Index n, double theta, double a, double inv_gamma2) noexcept {
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double up = theta + a - x[i];
    const double lo = theta - a - x[i];
    acc += std::exp(-up * up * inv_gamma2) - std::exp(-lo * lo * inv_gamma2);
  }
  return acc;
}

}  // namespace mmdbayes::detail
