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

#include "mmdbayes/kernel.hpp"
#include "mmdbayes/quadrature.hpp"
#include "mmdbayes/random.hpp"
#include "mmdbayes/types.hpp"

#include <span>
#include <string>
#include <string_view>

namespace mmdbayes {

enum class ModelKind { GaussianLocation, UniformLocation };

std::string_view to_string(ModelKind kind) noexcept;

/// Location family {P_theta : theta in R^d}.
///
/// GaussianLocation: P_theta = N(theta, sigma2 I_d).
/// UniformLocation:  P_theta = product of U[theta_j - a, theta_j + a], a = half_width.
struct ModelSpec {
  ModelKind kind = ModelKind::GaussianLocation;
  Index dim = 1;
  double sigma2 = 1.0;
  double half_width = 0.5;

  static ModelSpec gaussian(Index dim, double sigma2 = 1.0);
  static ModelSpec uniform(Index dim, double half_width = 0.5);

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// How the kernel expectations of a model are computed.
enum class ExpectationMethod {
  Auto,        ///< ClosedForm for both families
  ClosedForm,  ///< Gaussian: noncentral chi-square identity; uniform: erf antiderivative
  Quadrature,  ///< Gauss-Legendre over the uniform support (uniform only)
  MonteCarlo,  ///< sampling from P_theta
};

/// n i.i.d. rows from P_theta.
Samples sample(const ModelSpec& model, const Vector& theta, Index n, Rng& rng);

/// log p_theta(x).
double log_density(const ModelSpec& model, const Vector& theta, std::span<const double> x);

/// grad_theta log p_theta(x) = (x - theta) / sigma2.
/// Throws UnsupportedError for the uniform family (use uniform_expectation_grad).
Vector score(const ModelSpec& model, const Vector& theta, std::span<const double> x);

/// E_{X ~ P_theta} k(x, X).
double point_expectation(const GaussianKernel& kernel, const ModelSpec& model, const Vector& theta,
                         std::span<const double> x,
                         ExpectationMethod method = ExpectationMethod::Auto,
                         int quadrature_nodes = kDefaultQuadratureNodes);

/// E_{X, X' ~ P_theta} k(X, X'). Independent of theta for both location families.
double self_expectation(const GaussianKernel& kernel, const ModelSpec& model,
                        ExpectationMethod method = ExpectationMethod::Auto,
                        int quadrature_nodes = kDefaultQuadratureNodes);

struct UniformExpectationGrad {
  double d_dm = 0.0;
  double d_ds = 0.0;
};

/// Gradient of E_{X ~ U[theta - a, theta + a]} k(x_i, X) at theta = m + s * theta_k
/// with respect to m and s (d = 1). With K(u) = exp(-u^2 / gamma2):
///   d_dm = (K(m + s theta_k + a - x_i) - K(m + s theta_k - a - x_i)) / (2a)
///   d_ds = theta_k * d_dm
/// The self term E_{X, X' ~ P_theta} k(X, X') does not depend on theta, so its
/// gradient in (m, s) is identically zero and has no counterpart here.
/// Throws UnsupportedError unless the model is uniform with dim == 1.
UniformExpectationGrad uniform_expectation_grad(const GaussianKernel& kernel,
                                                const ModelSpec& model, double m, double s,
                                                double theta_k, double x_i);

/// d_dm without argument checks.
inline double uniform_mean_grad_unchecked(double gamma2, double half_width, double theta,
                                          double x_i) noexcept {
  const double up = theta + half_width - x_i;
  const double lo = theta - half_width - x_i;
  return (std::exp(-up * up / gamma2) - std::exp(-lo * lo / gamma2)) / (2.0 * half_width);
}

}  // namespace mmdbayes
