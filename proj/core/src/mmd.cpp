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

#include "mmdbayes/mmd.hpp"

#include "mmdbayes/optimize.hpp"
#include "mmdbayes/summation.hpp"

#include <cmath>
#include <vector>

namespace mmdbayes {
namespace {

void check_pair(const Samples& x, const Samples& y, const char* where) {
  require(x.rows() >= 1 && y.rows() >= 1, std::string(where) + ": empty sample");
  require(x.cols() >= 1 && x.cols() == y.cols(), std::string(where) + ": dimension mismatch");
}

// Sum over i < j of k(x_i, x_j). Optionally accumulates per-row totals of the
// off-diagonal entries.
double upper_pair_sum(const GaussianKernel& kernel, const Samples& x, std::vector<double>* rows) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (rows) rows->assign(static_cast<std::size_t>(n), 0.0);
  CompensatedSum total;
  for (Index i = 0; i < n; ++i) {
    const double* xi = x.data() + i * d;
    double row = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double v = kernel.eval_unchecked(xi, x.data() + j * d, d);
      row += v;
      if (rows) (*rows)[static_cast<std::size_t>(j)] += v;
    }
    if (rows) (*rows)[static_cast<std::size_t>(i)] += row;
    total.add(row);
  }
  return total.value();
}

double cross_sum(const GaussianKernel& kernel, const Samples& x, const Samples& y,
                 std::vector<double>* rows, std::vector<double>* cols) {
  const Index n = x.rows();
  const Index m = y.rows();
  const Index d = x.cols();
  if (rows) rows->assign(static_cast<std::size_t>(n), 0.0);
  if (cols) cols->assign(static_cast<std::size_t>(m), 0.0);
  CompensatedSum total;
  for (Index i = 0; i < n; ++i) {
    const double* xi = x.data() + i * d;
    double row = 0.0;
    for (Index j = 0; j < m; ++j) {
      const double v = kernel.eval_unchecked(xi, y.data() + j * d, d);
      row += v;
      if (cols) (*cols)[static_cast<std::size_t>(j)] += v;
    }
    if (rows) (*rows)[static_cast<std::size_t>(i)] = row;
    total.add(row);
  }
  return total.value();
}

double sample_variance(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / (n - 1.0);
}

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::VStatistic: return "v_statistic";
    case EstimatorKind::UStatistic: return "u_statistic";
    case EstimatorKind::LinearUStatistic: return "linear_u_statistic";
    case EstimatorKind::ClosedForm: return "closed_form";
    case EstimatorKind::Quadrature: return "quadrature";
    case EstimatorKind::MonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

double mean_kernel(const GaussianKernel& kernel, const Samples& x, const Samples& y) {
  check_pair(x, y, "mean_kernel");
  return cross_sum(kernel, x, y, nullptr, nullptr) /
         (static_cast<double>(x.rows()) * static_cast<double>(y.rows()));
}

double empirical_self_term(const GaussianKernel& kernel, const Samples& x) {
  check_pair(x, x, "empirical_self_term");
  const double n = static_cast<double>(x.rows());
  return (n + 2.0 * upper_pair_sum(kernel, x, nullptr)) / (n * n);
}

Mmd2Estimate mmd2_vstat(const GaussianKernel& kernel, const Samples& x, const Samples& y) {
  check_pair(x, y, "mmd2_vstat");
  const double n = static_cast<double>(x.rows());
  const double m = static_cast<double>(y.rows());
  const double sxx = (n + 2.0 * upper_pair_sum(kernel, x, nullptr)) / (n * n);
  const double syy = (m + 2.0 * upper_pair_sum(kernel, y, nullptr)) / (m * m);
  const double sxy = cross_sum(kernel, x, y, nullptr, nullptr) / (n * m);
  Mmd2Estimate est;
  est.value = sxx + syy - 2.0 * sxy;
  est.kind = EstimatorKind::VStatistic;
  est.n_x = x.rows();
  est.n_y = y.rows();
  return est;
}

Mmd2Estimate mmd2_ustat(const GaussianKernel& kernel, const Samples& x, const Samples& y) {
  check_pair(x, y, "mmd2_ustat");
  require(x.rows() >= 2 && y.rows() >= 2, "mmd2_ustat: both samples need at least 2 rows");
  const double n = static_cast<double>(x.rows());
  const double m = static_cast<double>(y.rows());
  std::vector<double> rx, ry, cxy_rows, cxy_cols;
  const double sxx = 2.0 * upper_pair_sum(kernel, x, &rx) / (n * (n - 1.0));
  const double syy = 2.0 * upper_pair_sum(kernel, y, &ry) / (m * (m - 1.0));
  const double sxy = cross_sum(kernel, x, y, &cxy_rows, &cxy_cols) / (n * m);

  // Projection h(x_i) = E k(x_i, X') - E k(x_i, Y), and the same for y_j.
  std::vector<double> hx(rx.size()), hy(ry.size());
  for (std::size_t i = 0; i < hx.size(); ++i) hx[i] = rx[i] / (n - 1.0) - cxy_rows[i] / m;
  for (std::size_t j = 0; j < hy.size(); ++j) hy[j] = ry[j] / (m - 1.0) - cxy_cols[j] / n;

  Mmd2Estimate est;
  est.value = sxx + syy - 2.0 * sxy;
  est.kind = EstimatorKind::UStatistic;
  est.n_x = x.rows();
  est.n_y = y.rows();
  est.std_error = std::sqrt(4.0 * sample_variance(hx) / n + 4.0 * sample_variance(hy) / m);
  return est;
}

Mmd2Estimate mmd2_linear_ustat(const GaussianKernel& kernel, const Samples& x, const Samples& y) {
  check_pair(x, y, "mmd2_linear_ustat");
  require(x.rows() >= 2 && y.rows() >= 2, "mmd2_linear_ustat: both samples need at least 2 rows");
  const Index pairs = std::min(x.rows(), y.rows()) / 2;
  const Index d = x.cols();
  std::vector<double> h(static_cast<std::size_t>(pairs));
  for (Index p = 0; p < pairs; ++p) {
    const double* x1 = x.data() + (2 * p) * d;
    const double* x2 = x.data() + (2 * p + 1) * d;
    const double* y1 = y.data() + (2 * p) * d;
    const double* y2 = y.data() + (2 * p + 1) * d;
    h[static_cast<std::size_t>(p)] = kernel.eval_unchecked(x1, x2, d) +
                                     kernel.eval_unchecked(y1, y2, d) -
                                     kernel.eval_unchecked(x1, y2, d) -
                                     kernel.eval_unchecked(x2, y1, d);
  }
  Mmd2Estimate est;
  est.value = compensated_sum(h) / static_cast<double>(pairs);
  est.kind = EstimatorKind::LinearUStatistic;
  est.n_x = x.rows();
  est.n_y = y.rows();
  est.std_error = pairs >= 2 ? std::sqrt(sample_variance(h) / static_cast<double>(pairs))
                             : std::numeric_limits<double>::quiet_NaN();
  return est;
}

PairedKernelMean paired_kernel_mean(const GaussianKernel& kernel, const Samples& x, const Samples& y) {
  check_pair(x, y, "paired_kernel_mean");
  require(x.rows() == y.rows() && x.rows() >= 2, "paired_kernel_mean: need equal sizes >= 2");
  std::vector<double> v(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i)
    v[static_cast<std::size_t>(i)] = kernel.eval_unchecked(x.data() + i * x.cols(),
                                                           y.data() + i * y.cols(), x.cols());
  const double n = static_cast<double>(v.size());
  return {compensated_sum(v) / n, std::sqrt(sample_variance(v) / n)};
}

Mmd2Estimate mmd2_model_vs_empirical(const GaussianKernel& kernel, const ModelSpec& model,
                                     const Vector& theta, const Samples& data, Rng& rng,
                                     const ModelExpectationOptions& options) {
  model.validate();
  require(data.rows() >= 1, "mmd2_model_vs_empirical: empty sample");
  require(data.cols() == model.dim && theta.size() == model.dim,
          "mmd2_model_vs_empirical: dimension mismatch");
  const double n = static_cast<double>(data.rows());
  const double data_term =
      options.data_self_term ? *options.data_self_term : empirical_self_term(kernel, data);

  Mmd2Estimate est;
  est.n_x = data.rows();

  if (options.method == ExpectationMethod::MonteCarlo) {
    require(options.mc_samples >= 2, "mmd2_model_vs_empirical: mc_samples must be >= 2");
    const Samples draws = sample(model, theta, options.mc_samples, rng);
    const double mc = static_cast<double>(options.mc_samples);
    std::vector<double> self_rows, cross_cols;
    const double self = 2.0 * upper_pair_sum(kernel, draws, &self_rows) / (mc * (mc - 1.0));
    const double cross = cross_sum(kernel, data, draws, nullptr, &cross_cols) / (n * mc);
    std::vector<double> h(self_rows.size());
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = self_rows[j] / (mc - 1.0) - cross_cols[j] / n;
    est.value = self - 2.0 * cross + data_term;
    est.kind = EstimatorKind::MonteCarlo;
    est.n_y = options.mc_samples;
    est.std_error = std::sqrt(4.0 * sample_variance(h) / mc);
    return est;
  }

  const double self = self_expectation(kernel, model, options.method, options.quadrature_nodes);
  CompensatedSum cross;
  for (Index i = 0; i < data.rows(); ++i)
    cross.add(point_expectation(kernel, model, theta, row_span(data, i), options.method,
                                options.quadrature_nodes));
  est.value = self - 2.0 * cross.value() / n + data_term;
  est.kind = options.method == ExpectationMethod::Quadrature ? EstimatorKind::Quadrature
                                                             : EstimatorKind::ClosedForm;
  return est;
}

double mmd2_gaussian_closed(const Vector& theta, const Vector& theta_prime, double sigma2,
                            const GaussianKernel& kernel) {
  require(theta.size() >= 1 && theta.size() == theta_prime.size(),
          "mmd2_gaussian_closed: dimension mismatch");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "mmd2_gaussian_closed: sigma2 must be > 0");
  const double g2 = kernel.gamma2();
  const double denom = 4.0 * sigma2 + g2;
  const double scale = std::exp(0.5 * static_cast<double>(theta.size()) * std::log(g2 / denom));
  return -2.0 * scale * std::expm1(-(theta - theta_prime).squaredNorm() / denom);
}

void ContaminatedGaussianSpec::validate() const {
  require(theta0.size() >= 1 && theta0.size() == theta_c.size(),
          "ContaminatedGaussianSpec: theta0 and theta_c must have the same dimension >= 1");
  require(epsilon >= 0.0 && epsilon < 0.5, "ContaminatedGaussianSpec: epsilon must lie in [0, 0.5)");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "ContaminatedGaussianSpec: sigma2 must be > 0");
}

double mmd2_contaminated_criterion(const ContaminatedGaussianSpec& spec, const Vector& theta,
                                   const GaussianKernel& kernel) {
  spec.validate();
  require(theta.size() == spec.theta0.size(), "mmd2_contaminated_criterion: dimension mismatch");
  // Each bracket is 1 - exp(-r^2 / (4 sigma2 + gamma2)), i.e. D^2 / (2c).
  const double to_inlier = mmd2_gaussian_closed(theta, spec.theta0, spec.sigma2, kernel);
  const double to_outlier = mmd2_gaussian_closed(theta, spec.theta_c, spec.sigma2, kernel);
  const double between = mmd2_gaussian_closed(spec.theta0, spec.theta_c, spec.sigma2, kernel);
  const double eps = spec.epsilon;
  return (1.0 - eps) * to_inlier + eps * to_outlier - eps * (1.0 - eps) * between;
}

double kl_contaminated_criterion(const ContaminatedGaussianSpec& spec, const Vector& theta) {
  spec.validate();
  require(theta.size() == spec.theta0.size(), "kl_contaminated_criterion: dimension mismatch");
  return (1.0 - spec.epsilon) * (theta - spec.theta0).squaredNorm() +
         spec.epsilon * (theta - spec.theta_c).squaredNorm();
}

Vector kl_contaminated_minimizer(const ContaminatedGaussianSpec& spec) {
  spec.validate();
  return (1.0 - spec.epsilon) * spec.theta0 + spec.epsilon * spec.theta_c;
}

namespace {

template <class Criterion>
Vector minimize_on_segment(const ContaminatedGaussianSpec& spec, Criterion&& criterion) {
  spec.validate();
  const Vector dir = spec.theta_c - spec.theta0;
  if (dir.squaredNorm() == 0.0) return spec.theta0;
  const auto along = [&](double t) { return criterion(Vector(spec.theta0 + t * dir)); };
  const ScalarMinimum best = minimize_scalar(along, 0.0, 1.0, 4001);
  return spec.theta0 + best.x * dir;
}

}  // namespace

Vector minimize_mmd_contaminated(const ContaminatedGaussianSpec& spec, const GaussianKernel& kernel) {
  return minimize_on_segment(
      spec, [&](const Vector& th) { return mmd2_contaminated_criterion(spec, th, kernel); });
}

Vector minimize_kl_contaminated(const ContaminatedGaussianSpec& spec) {
  return minimize_on_segment(spec, [&](const Vector& th) { return kl_contaminated_criterion(spec, th); });
}

ContaminationReport verify_contamination_argmins(const ContaminatedGaussianSpec& spec,
                                                 const GaussianKernel& kernel) {
  ContaminationReport r;
  r.mmd_argmin = minimize_mmd_contaminated(spec, kernel);
  r.kl_argmin = minimize_kl_contaminated(spec);
  r.kl_expected = kl_contaminated_minimizer(spec);
  r.mmd_error = (r.mmd_argmin - spec.theta0).norm();
  r.kl_error = (r.kl_argmin - r.kl_expected).norm();
  r.mmd_pass = r.mmd_error <= 1e-3;
  r.kl_pass = r.kl_error <= 1e-6;
  return r;
}

EmpiricalBoundReport verify_lemma1(const GaussianKernel& kernel, const ModelSpec& model,
                           const Vector& theta0, Index n, Index trials, Rng& rng) {
  require(n >= 1, "verify_lemma1: n must be >= 1");
  require(trials >= 100, "verify_lemma1: trials must be >= 100");
  std::vector<double> values(static_cast<std::size_t>(trials));
  for (Index t = 0; t < trials; ++t) {
    const Samples data = sample(model, theta0, n, rng);
    values[static_cast<std::size_t>(t)] =
        mmd2_model_vs_empirical(kernel, model, theta0, data, rng).value;
  }
  EmpiricalBoundReport r;
  r.n = n;
  r.trials = trials;
  r.empirical_mean = compensated_sum(values) / static_cast<double>(trials);
  r.std_error = std::sqrt(sample_variance(values) / static_cast<double>(trials));
  r.bound = 1.0 / static_cast<double>(n);
  r.pass = r.empirical_mean <= r.bound + 3.0 * r.std_error;
  return r;
}

}  // namespace mmdbayes
