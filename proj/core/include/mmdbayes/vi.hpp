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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace mmdbayes {

/// Variational family member N(m, diag(s^2)).
struct MeanFieldGaussian {
  Vector m;
  Vector s;  ///< componentwise standard deviations, all > 0

  Index dim() const noexcept { return m.size(); }
  void validate() const;
};

/// Closed interval applied to every coordinate.
struct Box {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

enum class GradMode {
  /// One batch Y_1..Y_M ~ P_m shared by all particles (the published algorithm).
  SharedSample,
  /// Each particle theta^k gets its own draws Y ~ P_{theta^k}; unbiased.
  PerParticle,
};

enum class GradEstimator {
  ScoreFunction,      ///< log-derivative trick; needs a differentiable density
  UniformClosedForm,  ///< exact inner gradients of the uniform location model
};

std::string_view to_string(GradMode mode) noexcept;
std::string_view to_string(GradEstimator estimator) noexcept;

/// eta_t = scale / sqrt(t).
struct InverseSqrtSchedule {
  double scale = 1.0;
  double at(Index t) const noexcept;
};

struct PsgaviConfig {
  /// log(beta). +infinity (the default) switches the KL regularizer off exactly:
  /// 1/beta = exp(-beta_log) is evaluated in log space and underflows to 0 long
  /// before beta itself would overflow.
  double beta_log = std::numeric_limits<double>::infinity();
  std::optional<Index> mc_batch;  ///< particles per step M; unset means M = n
  Index draws_per_particle = 2;   ///< PerParticle mode: model draws per particle
  Index iterations = 1000;        ///< T
  InverseSqrtSchedule step;
  Box box_m{-1e6, 1e6};
  Box box_s{1e-6, 1e3};
  std::uint64_t seed = 20190930;
  GradMode grad_mode = GradMode::PerParticle;
  GradEstimator estimator = GradEstimator::ScoreFunction;
  bool record_objective = true;  ///< evaluate the criterion for every trace record

  double inv_beta() const noexcept;
  Index batch_size(Index n) const noexcept { return mc_batch.value_or(n); }

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct Gradient {
  Vector g_m;
  Vector g_s;
};

struct TraceRecord {
  Index t = 0;
  Vector m;
  Vector s;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double grad_norm_m = std::numeric_limits<double>::quiet_NaN();
  double grad_norm_s = std::numeric_limits<double>::quiet_NaN();
};

struct PsgaviTrace {
  std::vector<TraceRecord> records;  ///< T + 1 entries, t = 0..T
  MeanFieldGaussian final;
};

/// KL(N(m, diag(s^2)) || N(0, I)) = (1/2) sum_j (m_j^2 + s_j^2 - log s_j^2 - 1).
double kl_to_standard_prior(const MeanFieldGaussian& q);

/// Componentwise clamp of v to [lo, hi]. Throws std::invalid_argument if lo > hi.
Vector project_box(const Vector& v, double lo, double hi);
inline Vector project_box(const Vector& v, const Box& box) { return project_box(v, box.lo, box.hi); }

/// Componentwise median of the data with s = 1.
MeanFieldGaussian default_init(const Samples& data);

/// The variational criterion
///   R_n(m, s) = E_q E_{X,X' ~ P_theta} k(X, X') - (2/n) sum_i E_q E_{X ~ P_theta} k(X_i, X)
///               + (1/n^2) sum_{i,j} k(X_i, X_j) + KL(q || N(0, I)) / beta
/// for a fixed data set. The data-data term is computed once at construction.
class VariationalObjective {
 public:
  VariationalObjective(const Samples& data, const ModelSpec& model, const GaussianKernel& kernel);

  const Samples& data() const noexcept { return data_; }
  const ModelSpec& model() const noexcept { return model_; }
  const GaussianKernel& kernel() const noexcept { return kernel_; }
  double data_self_term() const noexcept { return data_self_; }
  double model_self_term() const noexcept { return model_self_; }

  /// D_k^2(P_theta, P_hat_n) in closed form.
  double mmd2_at(const Vector& theta) const;

  /// Monte Carlo average of D_k^2(P_{m + s * z_k}, P_hat_n) over the rows z_k of
  /// `standard_draws`, plus KL / beta.
  double evaluate(const MeanFieldGaussian& q, const Samples& standard_draws, double inv_beta) const;

 private:
  Samples data_;
  ModelSpec model_;
  GaussianKernel kernel_;
  double data_self_;
  double model_self_;
};

/// R_n estimated with M reparameterized particles drawn from `config.seed`.
double objective_rn(const MeanFieldGaussian& q, const Samples& data, const ModelSpec& model,
                    const GaussianKernel& kernel, const PsgaviConfig& config);

/// Gradient of KL(q || N(0, I)) / beta: (m / beta, (s - 1/s) / beta).
Gradient regularizer_grad(const MeanFieldGaussian& q, const PsgaviConfig& config);

/// Stochastic gradient of R_n at q.
/// Throws std::invalid_argument if M < 2 (or draws_per_particle < 2 in
/// PerParticle mode) and UnsupportedError for an estimator the model cannot use.
Gradient grad_estimate(const MeanFieldGaussian& q, const Samples& data, const ModelSpec& model,
                       const GaussianKernel& kernel, const PsgaviConfig& config, Rng& rng);

/// Projected stochastic gradient descent on R_n from `init`; the rows of `data`
/// are put in lexicographic order first, so the result does not depend on row order.
PsgaviTrace psgavi(const Samples& data, const ModelSpec& model, const GaussianKernel& kernel,
                   const PsgaviConfig& config, const MeanFieldGaussian& init);

/// Trace CSV: header `t,m_0..m_{d-1},s_0..s_{d-1},objective,grad_norm_m,grad_norm_s`.
/// Non-finite values are written as NA.
void write_trace_csv(std::ostream& out, const PsgaviTrace& trace);

}  // namespace mmdbayes
