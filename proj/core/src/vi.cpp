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

#include "mmdbayes/vi.hpp"

#include "mmdbayes/csv.hpp"
#include "mmdbayes/mmd.hpp"
#include "mmdbayes/summation.hpp"

#include "hot_loops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace mmdbayes {
namespace {

constexpr std::uint64_t kGradientStream = 1;
constexpr std::uint64_t kObjectiveStream = 2;

Samples standard_normals(Index rows, Index cols, Rng& rng) {
  Samples z(rows, cols);
  for (Index i = 0; i < z.size(); ++i) z.data()[i] = standard_normal(rng);
  return z;
}

Samples lexicographic_rows(const Samples& data) {
  std::vector<Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const auto ra = row_span(data, a);
    const auto rb = row_span(data, b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  Samples out(data.rows(), data.cols());
  for (std::size_t i = 0; i < order.size(); ++i) out.row(static_cast<Index>(i)) = data.row(order[i]);
  return out;
}

void check_problem(const MeanFieldGaussian& q, const Samples& data, const ModelSpec& model) {
  q.validate();
  model.validate();
  require(data.rows() >= 1, "empty data");
  require(data.cols() == model.dim && q.dim() == model.dim, "dimension mismatch between q, data and model");
}

void check_estimator(const ModelSpec& model, const PsgaviConfig& config) {
  if (config.estimator == GradEstimator::ScoreFunction && model.kind != ModelKind::GaussianLocation) {
    throw UnsupportedError("score-function gradients need a differentiable log-density; "
                           "use the uniform closed-form estimator for the uniform model");
  }
  if (config.estimator == GradEstimator::UniformClosedForm &&
      (model.kind != ModelKind::UniformLocation || model.dim != 1)) {
    throw UnsupportedError("the uniform closed-form estimator requires the uniform model with d = 1");
  }
}

// Sum over data rows of k(x_i, y) for one point y.
double data_kernel_sum(const GaussianKernel& kernel, const Samples& data, const double* y) {
  const double inv_g2 = 1.0 / kernel.gamma2();
  if (data.cols() == 1) return detail::gaussian_sum_1d(data.data(), data.rows(), y[0], inv_g2);
  return detail::gaussian_sum(data.data(), data.rows(), data.cols(), y, inv_g2);
}

// Score-function and closed-form estimators of grad R_n without the regularizer.
class GradientEngine {
 public:
  GradientEngine(const Samples& data, const ModelSpec& model, const GaussianKernel& kernel,
                 const PsgaviConfig& config)
      : data_(data), model_(model), kernel_(kernel), config_(config) {
    batch_ = config.batch_size(data.rows());
    require(batch_ >= 2, "grad_estimate: the batch size M must be >= 2");
    if (config.grad_mode == GradMode::PerParticle && config.estimator == GradEstimator::ScoreFunction)
      require(config.draws_per_particle >= 2, "grad_estimate: draws_per_particle must be >= 2");
    check_estimator(model, config);
  }

  Gradient compute(const MeanFieldGaussian& q, Rng& rng) const {
    Gradient g;
    if (config_.estimator == GradEstimator::UniformClosedForm) {
      g = uniform_closed_form(q, rng);
    } else if (config_.grad_mode == GradMode::PerParticle) {
      g = score_per_particle(q, rng);
    } else {
      g = score_shared(q, rng);
    }
    const Gradient reg = regularizer_grad(q, config_);
    g.g_m += reg.g_m;
    g.g_s += reg.g_s;
    return g;
  }

 private:
  // Per-draw weight  (1/(L-1)) sum_{l != j} k(Y_j, Y_l) - (1/n) sum_i k(X_i, Y_j).
  std::vector<double> weights(const Samples& ys) const {
    const Index count = ys.rows();
    const Index d = ys.cols();
    std::vector<double> self(static_cast<std::size_t>(count), 0.0);
    for (Index j = 0; j < count; ++j) {
      for (Index l = j + 1; l < count; ++l) {
        const double v = kernel_.eval_unchecked(ys.data() + j * d, ys.data() + l * d, d);
        self[static_cast<std::size_t>(j)] += v;
        self[static_cast<std::size_t>(l)] += v;
      }
    }
    const double n = static_cast<double>(data_.rows());
    std::vector<double> w(static_cast<std::size_t>(count));
    for (Index j = 0; j < count; ++j) {
      w[static_cast<std::size_t>(j)] = self[static_cast<std::size_t>(j)] / static_cast<double>(count - 1) -
                                       data_kernel_sum(kernel_, data_, ys.data() + j * d) / n;
    }
    return w;
  }

  Gradient score_per_particle(const MeanFieldGaussian& q, Rng& rng) const {
    const Index d = q.dim();
    const Index draws = config_.draws_per_particle;
    const double sd = std::sqrt(model_.sigma2);
    Gradient g{Vector::Zero(d), Vector::Zero(d)};
    Vector z(d), theta(d), g_theta(d);
    Samples noise(draws, d), ys(draws, d);
    for (Index k = 0; k < batch_; ++k) {
      for (Index j = 0; j < d; ++j) z[j] = standard_normal(rng);
      theta = q.m + q.s.cwiseProduct(z);
      for (Index r = 0; r < draws; ++r)
        for (Index j = 0; j < d; ++j) {
          noise(r, j) = standard_normal(rng);
          ys(r, j) = theta[j] + sd * noise(r, j);
        }
      const auto w = weights(ys);
      g_theta.setZero();
      // grad_theta log p_theta(Y_r) = (Y_r - theta) / sigma2 = noise_r / sd.
      for (Index r = 0; r < draws; ++r) g_theta += w[static_cast<std::size_t>(r)] * noise.row(r).transpose() / sd;
      g_theta *= 2.0 / static_cast<double>(draws);
      g.g_m += g_theta;
      g.g_s += z.cwiseProduct(g_theta);
    }
    g.g_m /= static_cast<double>(batch_);
    g.g_s /= static_cast<double>(batch_);
    return g;
  }

  Gradient score_shared(const MeanFieldGaussian& q, Rng& rng) const {
    const Index d = q.dim();
    const double mb = static_cast<double>(batch_);
    const Samples z = standard_normals(batch_, d, rng);
    Vector sum_theta = Vector::Zero(d);
    Vector sum_z = Vector::Zero(d);
    Vector sum_z_theta = Vector::Zero(d);
    for (Index k = 0; k < batch_; ++k) {
      const Vector zk = z.row(k).transpose();
      const Vector theta = q.m + q.s.cwiseProduct(zk);
      sum_theta += theta;
      sum_z += zk;
      sum_z_theta += zk.cwiseProduct(theta);
    }
    // Y_1..Y_M ~ P_m, shared across particles.
    const Samples ys = sample(model_, q.m, batch_, rng);
    const auto w = weights(ys);
    Gradient g{Vector::Zero(d), Vector::Zero(d)};
    for (Index j = 0; j < batch_; ++j) {
      const Vector y = ys.row(j).transpose();
      const double wj = w[static_cast<std::size_t>(j)];
      // sum_k grad_m log p_{theta_k}(Y_j) and sum_k grad_s log p_{theta_k}(Y_j).
      g.g_m += wj * (mb * y - sum_theta);
      g.g_s += wj * (y.cwiseProduct(sum_z) - sum_z_theta);
    }
    const double scale = 2.0 / (mb * mb * model_.sigma2);
    g.g_m *= scale;
    g.g_s *= scale;
    return g;
  }

  Gradient uniform_closed_form(const MeanFieldGaussian& q, Rng& rng) const {
    const double inv_g2 = 1.0 / kernel_.gamma2();
    const double a = model_.half_width;
    const double* x = data_.data();
    const Index n = data_.rows();
    CompensatedSum acc_m;
    CompensatedSum acc_s;
    for (Index k = 0; k < batch_; ++k) {
      const double z = standard_normal(rng);
      const double theta = q.m[0] + q.s[0] * z;
      const double acc = detail::uniform_edge_sum(x, n, theta, a, inv_g2) / (2.0 * a);
      acc_m.add(acc);
      acc_s.add(z * acc);
    }
    const double scale = -2.0 / (static_cast<double>(n) * static_cast<double>(batch_));
    Gradient g{Vector::Constant(1, scale * acc_m.value()), Vector::Constant(1, scale * acc_s.value())};
    return g;
  }

  const Samples& data_;
  const ModelSpec& model_;
  const GaussianKernel& kernel_;
  const PsgaviConfig& config_;
  Index batch_ = 0;
};

}  // namespace

std::string_view to_string(GradMode mode) noexcept {
  return mode == GradMode::SharedSample ? "shared_sample" : "per_particle";
}

std::string_view to_string(GradEstimator estimator) noexcept {
  return estimator == GradEstimator::ScoreFunction ? "score_function" : "uniform_closed_form";
}

void MeanFieldGaussian::validate() const {
  require(m.size() >= 1 && m.size() == s.size(), "MeanFieldGaussian: m and s must have equal size >= 1");
  require(m.allFinite() && s.allFinite(), "MeanFieldGaussian: non-finite parameters");
  require((s.array() > 0.0).all(), "MeanFieldGaussian: s must be > 0");
}

double InverseSqrtSchedule::at(Index t) const noexcept {
  return scale / std::sqrt(static_cast<double>(t));
}

double PsgaviConfig::inv_beta() const noexcept { return std::exp(-beta_log); }

void PsgaviConfig::validate() const {
  require(!std::isnan(beta_log) && beta_log != -std::numeric_limits<double>::infinity(),
          "PsgaviConfig: beta_log must be a number or +inf");
  require(!mc_batch || *mc_batch >= 2, "PsgaviConfig: mc_batch must be >= 2");
  require(draws_per_particle >= 2, "PsgaviConfig: draws_per_particle must be >= 2");
  require(iterations >= 1, "PsgaviConfig: iterations must be >= 1");
  require(std::isfinite(step.scale) && step.scale >= 0.0, "PsgaviConfig: step scale must be >= 0");
  require(box_m.lo <= box_m.hi, "PsgaviConfig: empty m box");
  require(box_s.lo <= box_s.hi, "PsgaviConfig: empty s box");
  require(box_s.lo > 0.0, "PsgaviConfig: the s box must have a positive floor");
}

double kl_to_standard_prior(const MeanFieldGaussian& q) {
  q.validate();
  double acc = 0.0;
  for (Index j = 0; j < q.dim(); ++j) {
    const double s2 = q.s[j] * q.s[j];
    acc += q.m[j] * q.m[j] + s2 - std::log(s2) - 1.0;
  }
  return 0.5 * acc;
}

Vector project_box(const Vector& v, double lo, double hi) {
  require(!(lo > hi), "project_box: lo > hi");
  return v.cwiseMax(lo).cwiseMin(hi);
}

MeanFieldGaussian default_init(const Samples& data) {
  require(data.rows() >= 1 && data.cols() >= 1, "default_init: empty data");
  const Index n = data.rows();
  Vector m(data.cols());
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Index j = 0; j < data.cols(); ++j) {
    for (Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = data(i, j);
    std::sort(col.begin(), col.end());
    const auto h = static_cast<std::size_t>(n / 2);
    m[j] = n % 2 == 1 ? col[h] : 0.5 * (col[h - 1] + col[h]);
  }
  return {m, Vector::Ones(data.cols())};
}

VariationalObjective::VariationalObjective(const Samples& data, const ModelSpec& model,
                                           const GaussianKernel& kernel)
    : data_(data), model_(model), kernel_(kernel) {
  model.validate();
  require(data.rows() >= 1 && data.cols() == model.dim, "VariationalObjective: bad data");
  data_self_ = empirical_self_term(kernel_, data_);
  model_self_ = self_expectation(kernel_, model_);
}

double VariationalObjective::mmd2_at(const Vector& theta) const {
  CompensatedSum cross;
  for (Index i = 0; i < data_.rows(); ++i)
    cross.add(point_expectation(kernel_, model_, theta, row_span(data_, i)));
  return model_self_ - 2.0 * cross.value() / static_cast<double>(data_.rows()) + data_self_;
}

double VariationalObjective::evaluate(const MeanFieldGaussian& q, const Samples& standard_draws,
                                      double inv_beta) const {
  q.validate();
  require(q.dim() == model_.dim && standard_draws.cols() == model_.dim && standard_draws.rows() >= 1,
          "VariationalObjective::evaluate: dimension mismatch");
  CompensatedSum acc;
  for (Index k = 0; k < standard_draws.rows(); ++k) {
    const Vector theta = q.m + q.s.cwiseProduct(standard_draws.row(k).transpose());
    acc.add(mmd2_at(theta));
  }
  double value = acc.value() / static_cast<double>(standard_draws.rows());
  if (inv_beta != 0.0) value += inv_beta * kl_to_standard_prior(q);
  return value;
}

double objective_rn(const MeanFieldGaussian& q, const Samples& data, const ModelSpec& model,
                    const GaussianKernel& kernel, const PsgaviConfig& config) {
  check_problem(q, data, model);
  config.validate();
  Rng rng(derive_seed(config.seed, kObjectiveStream));
  const Samples z = standard_normals(config.batch_size(data.rows()), model.dim, rng);
  return VariationalObjective(data, model, kernel).evaluate(q, z, config.inv_beta());
}

Gradient regularizer_grad(const MeanFieldGaussian& q, const PsgaviConfig& config) {
  const double ib = config.inv_beta();
  if (ib == 0.0) return {Vector::Zero(q.dim()), Vector::Zero(q.dim())};
  return {ib * q.m, ib * (q.s - q.s.cwiseInverse())};
}

Gradient grad_estimate(const MeanFieldGaussian& q, const Samples& data, const ModelSpec& model,
                       const GaussianKernel& kernel, const PsgaviConfig& config, Rng& rng) {
  check_problem(q, data, model);
  require(!config.mc_batch || *config.mc_batch >= 2, "grad_estimate: the batch size M must be >= 2");
  config.validate();
  return GradientEngine(data, model, kernel, config).compute(q, rng);
}

PsgaviTrace psgavi(const Samples& data, const ModelSpec& model, const GaussianKernel& kernel,
                   const PsgaviConfig& config, const MeanFieldGaussian& init) {
  check_problem(init, data, model);
  config.validate();
  require(project_box(init.m, config.box_m) == init.m, "psgavi: init.m outside the m box");
  require(project_box(init.s, config.box_s) == init.s, "psgavi: init.s outside the s box");

  const Samples sorted = lexicographic_rows(data);
  const GradientEngine engine(sorted, model, kernel, config);
  std::optional<VariationalObjective> objective;
  if (config.record_objective) objective.emplace(sorted, model, kernel);

  Rng grad_rng(derive_seed(config.seed, kGradientStream));
  Rng obj_rng(derive_seed(config.seed, kObjectiveStream));
  const Index batch = config.batch_size(data.rows());
  const double inv_beta = config.inv_beta();

  PsgaviTrace trace;
  trace.records.reserve(static_cast<std::size_t>(config.iterations + 1));
  MeanFieldGaussian q = init;

  auto record = [&](Index t, double gm, double gs) {
    TraceRecord r;
    r.t = t;
    r.m = q.m;
    r.s = q.s;
    if (objective) r.objective = objective->evaluate(q, standard_normals(batch, q.dim(), obj_rng), inv_beta);
    r.grad_norm_m = gm;
    r.grad_norm_s = gs;
    trace.records.push_back(std::move(r));
  };

  record(0, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  for (Index t = 1; t <= config.iterations; ++t) {
    const Gradient g = engine.compute(q, grad_rng);
    const double eta = config.step.at(t);
    q.m = project_box(q.m - eta * g.g_m, config.box_m);
    q.s = project_box(q.s - eta * g.g_s, config.box_s);
    record(t, g.g_m.norm(), g.g_s.norm());
  }
  trace.final = q;
  return trace;
}

void write_trace_csv(std::ostream& out, const PsgaviTrace& trace) {
  const Index d = trace.final.dim();
  out << "t";
  for (Index j = 0; j < d; ++j) out << ",m_" << j;
  for (Index j = 0; j < d; ++j) out << ",s_" << j;
  out << ",objective,grad_norm_m,grad_norm_s\n";
  for (const auto& r : trace.records) {
    out << r.t;
    for (Index j = 0; j < d; ++j) out << ',' << format_double(r.m[j]);
    for (Index j = 0; j < d; ++j) out << ',' << format_double(r.s[j]);
    out << ',' << format_double(r.objective) << ',' << format_double(r.grad_norm_m) << ','
        << format_double(r.grad_norm_s) << '\n';
  }
}

}  // namespace mmdbayes
