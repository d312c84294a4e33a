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
#include "mmdbayes/models.hpp"
#include "mmdbayes/random.hpp"
#include "mmdbayes/types.hpp"

#include <limits>
#include <optional>
#include <string_view>

namespace mmdbayes {

enum class EstimatorKind { VStatistic, UStatistic, LinearUStatistic, ClosedForm, Quadrature, MonteCarlo };

std::string_view to_string(EstimatorKind kind) noexcept;

/// Estimate of the squared MMD D_k^2(P, Q).
///
/// V-statistic and closed-form values are >= 0 up to rounding; U-statistics
/// are unbiased and can be negative. `std_error` is NaN when no error estimate
/// applies (closed forms, V-statistics).
struct Mmd2Estimate {
  double value = 0.0;
  EstimatorKind kind = EstimatorKind::VStatistic;
  Index n_x = 0;
  Index n_y = 0;
  double std_error = std::numeric_limits<double>::quiet_NaN();
};

/// Absolute tolerance under which an MMD^2 value counts as zero.
inline constexpr double kMmdZeroTolerance = 1e-12;

/// (1 / (n m)) sum_{i,j} k(x_i, y_j), tiled and compensated.
double mean_kernel(const GaussianKernel& kernel, const Samples& x, const Samples& y);

/// (1 / n^2) sum_{i,j} k(x_i, x_j); the theta-free data term of the VI criterion.
double empirical_self_term(const GaussianKernel& kernel, const Samples& x);

/// Plug-in (biased) estimator. Throws std::invalid_argument on empty samples
/// or a dimension mismatch.
Mmd2Estimate mmd2_vstat(const GaussianKernel& kernel, const Samples& x, const Samples& y);

/// Unbiased estimator with the diagonal removed from both within-sample sums.
/// `std_error` comes from the first-order Hoeffding projection; it degenerates
/// (tends to zero faster than the estimator's spread) when P = Q.
/// Throws std::invalid_argument when n < 2 or m < 2.
Mmd2Estimate mmd2_ustat(const GaussianKernel& kernel, const Samples& x, const Samples& y);

/// Linear-time incomplete U-statistic over floor(min(n, m) / 2) disjoint pairs.
/// Unbiased, with an exact i.i.d. standard error; for samples too large for
/// the quadratic estimator. Throws std::invalid_argument when n < 2 or m < 2.
Mmd2Estimate mmd2_linear_ustat(const GaussianKernel& kernel, const Samples& x, const Samples& y);

struct PairedKernelMean {
  double value = 0.0;
  double std_error = 0.0;
};

/// Mean and standard error of k(x_i, y_i) over paired rows; estimates
/// <mu_P, mu_Q> when x ~ P and y ~ Q independently.
PairedKernelMean paired_kernel_mean(const GaussianKernel& kernel, const Samples& x, const Samples& y);

struct ModelExpectationOptions {
  ExpectationMethod method = ExpectationMethod::Auto;
  Index mc_samples = 0;  ///< required (>= 2) for ExpectationMethod::MonteCarlo
  int quadrature_nodes = kDefaultQuadratureNodes;
  std::optional<double> data_self_term;  ///< reuse a cached empirical_self_term(data)
};

/// D_k^2(P_theta, P_hat_n) through
///   E_{X,X' ~ P_theta} k(X, X') - (2/n) sum_i E_{X ~ P_theta} k(X_i, X) + (1/n^2) sum_{i,j} k(X_i, X_j).
/// The model expectations are exact (closed form or quadrature) or Monte Carlo;
/// only the Monte Carlo path touches `rng`.
Mmd2Estimate mmd2_model_vs_empirical(const GaussianKernel& kernel, const ModelSpec& model,
                                     const Vector& theta, const Samples& data, Rng& rng,
                                     const ModelExpectationOptions& options = {});

/// 2 (gamma2 / (4 sigma2 + gamma2))^{d/2} (1 - exp(-|theta - theta'|^2 / (4 sigma2 + gamma2))).
double mmd2_gaussian_closed(const Vector& theta, const Vector& theta_prime, double sigma2,
                            const GaussianKernel& kernel);

/// Huber mixture P_0 = (1 - epsilon) N(theta0, sigma2 I) + epsilon N(theta_c, sigma2 I).
struct ContaminatedGaussianSpec {
  Vector theta0;
  Vector theta_c;
  double epsilon = 0.0;
  double sigma2 = 1.0;

  /// Requires 0 <= epsilon < 0.5, sigma2 > 0 and matching dimensions.
  void validate() const;
};

/// D_k^2(P_0, P_theta) in closed form.
double mmd2_contaminated_criterion(const ContaminatedGaussianSpec& spec, const Vector& theta,
                                   const GaussianKernel& kernel);

/// (1 - epsilon) |theta - theta0|^2 + epsilon |theta - theta_c|^2, the
/// theta-dependent part of KL(P_0 || P_theta) up to the factor 1 / (2 sigma2).
double kl_contaminated_criterion(const ContaminatedGaussianSpec& spec, const Vector& theta);

/// (1 - epsilon) theta0 + epsilon theta_c.
Vector kl_contaminated_minimizer(const ContaminatedGaussianSpec& spec);

/// Numerical minimizers. Every stationary point of either criterion is a convex
/// combination of theta0 and theta_c, so both search the segment between them.
Vector minimize_mmd_contaminated(const ContaminatedGaussianSpec& spec, const GaussianKernel& kernel);
Vector minimize_kl_contaminated(const ContaminatedGaussianSpec& spec);

struct ContaminationReport {
  Vector mmd_argmin;
  Vector kl_argmin;
  Vector kl_expected;
  double mmd_error = 0.0;  ///< |mmd_argmin - theta0|
  double kl_error = 0.0;   ///< |kl_argmin - kl_expected|
  bool mmd_pass = false;   ///< mmd_error <= 1e-3
  bool kl_pass = false;    ///< kl_error <= 1e-6
};

ContaminationReport verify_contamination_argmins(const ContaminatedGaussianSpec& spec,
                                                 const GaussianKernel& kernel);

struct EmpiricalBoundReport {
  Index n = 0;
  Index trials = 0;
  double empirical_mean = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  ///< 1 / n
  bool pass = false;   ///< empirical_mean <= bound + 3 std_error
};

/// Draws `trials` samples of size n from P_theta0 and averages the exact
/// D_k^2(P_hat_n, P_theta0). Requires n >= 1 and trials >= 100.
EmpiricalBoundReport verify_lemma1(const GaussianKernel& kernel, const ModelSpec& model,
                           const Vector& theta0, Index n, Index trials, Rng& rng);

}  // namespace mmdbayes
