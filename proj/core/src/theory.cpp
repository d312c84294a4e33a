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

#include "mmdbayes/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mmdbayes {
namespace {

// log (1 + 4 sigma2 / gamma2)
double log_ratio(const TheoryInputs& in) { return std::log1p(4.0 * in.sigma2 / in.gamma2); }

}  // namespace

void TheoryInputs::validate() const {
  require(std::isfinite(n) && n > 0.0, "TheoryInputs: n must be > 0");
  require(d >= 1, "TheoryInputs: d must be >= 1");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "TheoryInputs: sigma2 must be > 0");
  require(std::isfinite(gamma2) && gamma2 > 0.0, "TheoryInputs: gamma2 must be > 0");
  require(std::isfinite(theta_star_norm) && theta_star_norm >= 0.0,
          "TheoryInputs: theta_star_norm must be finite and >= 0");
}

double ball_radius(const TheoryInputs& in) {
  in.validate();
  const double dd = static_cast<double>(in.d);
  const double log_s2 = std::log((4.0 * in.sigma2 + in.gamma2) / (2.0 * in.n)) + 0.5 * dd * log_ratio(in);
  return std::exp(0.5 * log_s2);
}

double exact_ball_radius(const TheoryInputs& in) {
  in.validate();
  const double dd = static_cast<double>(in.d);
  // 2 c (1 - exp(-r^2 / w)) <= 1/n  with  c = (1 + 4 sigma2 / gamma2)^{-d/2}, w = 4 sigma2 + gamma2.
  const double slack = std::exp(0.5 * dd * log_ratio(in)) / (2.0 * in.n);
  if (slack >= 1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(-(4.0 * in.sigma2 + in.gamma2) * std::log1p(-slack));
}

PriorMassReport prior_mass_lower_bound(const TheoryInputs& in) {
  in.validate();
  const double dd = static_cast<double>(in.d);
  PriorMassReport r;
  r.inputs = in;
  r.s_n = ball_radius(in);
  r.f_theta_star = 0.5 * (in.theta_star_norm + r.s_n) * (in.theta_star_norm + r.s_n);
  r.log_L = 0.5 * dd * std::log(4.0 * in.sigma2 + in.gamma2) + 0.25 * dd * dd * log_ratio(in) -
            std::lgamma(0.5 * dd + 1.0) - 0.5 * dd * std::log(in.n) - dd * std::numbers::ln2;
  r.log_mass_lower_bound = r.log_L - r.f_theta_star;
  r.mass_lower_bound = std::exp(r.log_mass_lower_bound);
  r.beta_min = in.n * (r.f_theta_star - r.log_L);
  return r;
}

ExtendedPriorMassReport extended_prior_mass_construction(const TheoryInputs& in) {
  in.validate();
  const double dd = static_cast<double>(in.d);
  const double w = 4.0 * in.sigma2 + in.gamma2;
  const double half_d_log_ratio = 0.5 * dd * log_ratio(in);
  ExtendedPriorMassReport r;
  r.inputs = in;
  r.rho_variance = std::exp(std::log(w / (2.0 * dd * in.n)) + half_d_log_ratio);
  const double s2 = r.rho_variance;
  r.kl_value = 0.5 * (in.theta_star_norm * in.theta_star_norm + dd * (s2 - std::log(s2) - 1.0));
  // 2 c (1 - det(I + 2 s^2 / w I)^{-1/2}), c = (1 + 4 sigma2 / gamma2)^{-d/2}.
  const double y = 2.0 * s2 / w;
  r.mmd_integral_bound = -2.0 * std::exp(-half_d_log_ratio) * std::expm1(-0.5 * dd * std::log1p(y));
  r.beta_min_extended = in.n * r.kl_value;
  return r;
}

}  // namespace mmdbayes
