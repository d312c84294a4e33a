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

#include "mmdbayes/optimize.hpp"

#include "mmdbayes/types.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>

namespace mmdbayes {

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              int grid) {
  require(lo <= hi, "minimize_scalar: lo > hi");
  require(grid >= 3, "minimize_scalar: grid must be >= 3");
  if (lo == hi) return {lo, f(lo)};
  const double step = (hi - lo) / (grid - 1);
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double v = f(lo + step * i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = lo + step * std::max(0, best - 1);
  const double b = lo + step * std::min(grid - 1, best + 1);
  std::uintmax_t max_iter = 500;
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      f, a, b, std::numeric_limits<double>::digits, max_iter);
  if (fx <= best_value) return {x, fx};
  return {lo + step * best, best_value};
}

}  // namespace mmdbayes
