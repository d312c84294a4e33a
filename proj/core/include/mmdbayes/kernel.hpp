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

#include "mmdbayes/types.hpp"

#include <Eigen/Core>

#include <cmath>
#include <span>

namespace mmdbayes {

/// Gaussian kernel k(x, y) = exp(-|x - y|^2 / gamma2).
///
/// The only kernel family in the library; every closed form for model
/// embeddings below is specific to it.
class GaussianKernel {
 public:
  /// Throws std::invalid_argument unless gamma2 is finite and > 0.
  explicit GaussianKernel(double gamma2);

  /// Default bandwidth for dimension d: gamma2 = d.
  static GaussianKernel for_dimension(Index d);

  double gamma2() const noexcept { return gamma2_; }

  /// Throws std::invalid_argument on dimension mismatch or empty inputs.
  double eval(std::span<const double> x, std::span<const double> y) const;
  double eval(const Vector& x, const Vector& y) const { return eval(as_span(x), as_span(y)); }

  /// k as a function of the squared distance.
  double from_sq_dist(double sq) const noexcept { return std::exp(-sq / gamma2_); }

  /// Unchecked evaluation on raw rows of length d.
  double eval_unchecked(const double* x, const double* y, Index d) const noexcept {
    double sq = 0.0;
    for (Index j = 0; j < d; ++j) {
      const double diff = x[j] - y[j];
      sq += diff * diff;
    }
    return from_sq_dist(sq);
  }

  /// Gram block G(i, j) = k(X_i, Y_j), filled in row/column tiles of
  /// kGramBlock so that the working set stays small for large n.
  Eigen::MatrixXd gram(const Samples& x, const Samples& y) const;

 private:
  double gamma2_;
};

/// Tile edge used by gram() and the tiled MMD reductions.
inline constexpr Index kGramBlock = 256;

/// <mu_P, mu_Q> for P = N(theta, sigma2 I), Q = N(theta', sigma2 I):
///   (gamma2 / (4 sigma2 + gamma2))^{d/2} exp(-|theta - theta'|^2 / (4 sigma2 + gamma2)).
double gaussian_embedding_inner(const Vector& theta, const Vector& theta_prime, double sigma2,
                                const GaussianKernel& kernel);

/// E_{X ~ N(theta, sigma2 I)} k(x, X):
///   (gamma2 / (2 sigma2 + gamma2))^{d/2} exp(-|x - theta|^2 / (2 sigma2 + gamma2)).
double gaussian_point_embedding(std::span<const double> x, const Vector& theta, double sigma2,
                                const GaussianKernel& kernel);

}  // namespace mmdbayes
