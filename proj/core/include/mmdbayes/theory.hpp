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

namespace mmdbayes {

/// Gaussian location model N(theta, sigma2 I_d), Gaussian kernel with
/// bandwidth gamma2, standard normal prior, n observations.
struct TheoryInputs {
  double n = 0.0;
  Index d = 1;
  double sigma2 = 1.0;
  double gamma2 = 1.0;
  double theta_star_norm = 0.0;

  /// Throws std::invalid_argument unless n, d, sigma2, gamma2 > 0 and the norm is finite and >= 0.
  void validate() const;
};

/// Radius s_n of the Euclidean ball around theta* that sits inside the MMD ball
/// {theta : D_k^2(P_theta, P_theta*) <= 1/n}:
///   s_n = sqrt((4 sigma2 + gamma2) / (2n)) (1 + 4 sigma2 / gamma2)^{d/4}.
double ball_radius(const TheoryInputs& in);

/// Exact radius of the MMD ball, from inverting the closed-form D_k^2.
/// Infinite when the whole parameter space is inside the ball.
double exact_ball_radius(const TheoryInputs& in);

/// Lower bound pi(B_n) >= L exp(-f(theta*)) for the standard normal prior.
/// Logs are kept alongside the values because L overflows for moderate d.
struct PriorMassReport {
  TheoryInputs inputs;
  double s_n = 0.0;
  double f_theta_star = 0.0;      ///< (|theta*| + s_n)^2 / 2
  double log_L = 0.0;
  double log_mass_lower_bound = 0.0;
  double mass_lower_bound = 0.0;  ///< exp(log_L - f_theta_star)
  double beta_min = 0.0;          ///< n (f(theta*) - log L)
};

/// The Euclidean ball B(theta*, s_n) has prior mass at least
///   (2 pi)^{-d/2} exp(-f(theta*)) vol(B(theta*, s_n)),
/// which gives
///   log L = (d/2) log(4 sigma2 + gamma2) + (d^2/4) log(1 + 4 sigma2 / gamma2)
///           - log Gamma(d/2 + 1) - (d/2) log n - d log 2.
PriorMassReport prior_mass_lower_bound(const TheoryInputs& in);

/// rho_n = N(theta*, s^2 I_d) with s^2 = (4 sigma2 + gamma2) / (2 d n) (1 + 4 sigma2 / gamma2)^{d/2}.
struct ExtendedPriorMassReport {
  TheoryInputs inputs;
  double rho_variance = 0.0;        ///< s^2
  double kl_value = 0.0;            ///< KL(rho_n || N(0, I))
  double mmd_integral_bound = 0.0;  ///< exact integral of D_k^2(P_theta, P_theta*) d rho_n(theta), <= 1/n
  double beta_min_extended = 0.0;   ///< n KL(rho_n || N(0, I))
};

ExtendedPriorMassReport extended_prior_mass_construction(const TheoryInputs& in);

}  // namespace mmdbayes
