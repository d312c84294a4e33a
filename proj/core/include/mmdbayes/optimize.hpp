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

#pragma once

#include <functional>

namespace mmdbayes {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Global minimum of a 1-D function on [lo, hi]: scan `grid` equispaced points,
/// then refine with Brent's method inside the bracket around the best one.
/// Throws std::invalid_argument if lo > hi or grid < 3.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              int grid = 2001);

}  // namespace mmdbayes
