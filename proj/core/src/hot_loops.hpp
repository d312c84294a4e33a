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

// Vectorized inner loops of the optimizer. hot_loops.cpp is compiled with
// fast-math so that exp() maps to the SIMD math library; callers validate
// that every input is finite.

#include "mmdbayes/types.hpp"

namespace mmdbayes::detail {

/// sum_i exp(-(x_i - y)^2 * inv_gamma2) over n scalars.
double gaussian_sum_1d(const double* x, Index n, double y, double inv_gamma2) noexcept;

/// sum_i exp(-|x_i - y|^2 * inv_gamma2) over n row-major rows of length d.
double gaussian_sum(const double* x, Index n, Index d, const double* y, double inv_gamma2) noexcept;

/// sum_i [exp(-(theta + a - x_i)^2 * inv_gamma2) - exp(-(theta - a - x_i)^2 * inv_gamma2)].
double uniform_edge_sum(const double* x, Index n, double theta, double a, double inv_gamma2) noexcept;

}  // namespace mmdbayes::detail
