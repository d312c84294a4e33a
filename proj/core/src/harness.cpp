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

#include "mmdbayes/harness.hpp"

#include "mmdbayes/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mmdbayes {
namespace {

constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kOptimizerStream = 1;

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

Index ContaminationSpec::outlier_count() const noexcept {
  return static_cast<Index>(std::floor(epsilon * static_cast<double>(n) + 1e-9));
}

void ContaminationSpec::validate() const {
  require(epsilon >= 0.0 && epsilon < 0.5, "ContaminationSpec: epsilon must lie in [0, 0.5)");
  require(n >= 1, "ContaminationSpec: n must be >= 1");
  inlier.validate();
  require(theta0.size() == inlier.dim, "ContaminationSpec: theta0 dimension mismatch");
  if (outlier == OutlierKind::GaussianFixed)
    require(std::isfinite(outlier_variance) && outlier_variance > 0.0,
            "ContaminationSpec: outlier variance must be > 0");
}

Samples generate(const ContaminationSpec& spec, Rng& rng) {
  spec.validate();
  Samples data = sample(spec.inlier, spec.theta0, spec.n, rng);
  const Index d = data.cols();
  const Index outliers = spec.outlier_count();
  const double sd = std::sqrt(spec.outlier_variance);
  for (Index i = spec.n - outliers; i < spec.n; ++i) {
    for (Index j = 0; j < d; ++j) {
      data(i, j) = spec.outlier == OutlierKind::CauchyStd ? standard_cauchy(rng)
                                                          : spec.outlier_mean + sd * standard_normal(rng);
    }
  }
  for (Index i = spec.n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    if (j != i) data.row(i).swap(data.row(j));
  }
  return data;
}

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::Mmd: return "mmd";
    case Estimator::MleMean: return "mle_mean";
    case Estimator::ComponentwiseMedian: return "median";
    case Estimator::MomentsMean: return "moments_mean";
    case Estimator::Midrange: return "midrange";
  }
  return "unknown";
}

std::optional<Estimator> estimator_from_string(std::string_view name) noexcept {
  for (Estimator e : {Estimator::Mmd, Estimator::MleMean, Estimator::ComponentwiseMedian,
                      Estimator::MomentsMean, Estimator::Midrange})
    if (to_string(e) == name) return e;
  return std::nullopt;
}

Vector baseline(Estimator kind, const Samples& data) {
  require(data.rows() >= 1 && data.cols() >= 1, "baseline: empty data");
  switch (kind) {
    case Estimator::MleMean:
    case Estimator::MomentsMean:
      return data.colwise().mean().transpose();
    case Estimator::ComponentwiseMedian:
      return default_init(data).m;
    case Estimator::Midrange:
      return 0.5 * (data.colwise().minCoeff() + data.colwise().maxCoeff()).transpose();
    case Estimator::Mmd:
      break;
  }
  throw std::invalid_argument("baseline: the MMD estimator is not a baseline");
}

std::string_view to_string(Problem p) noexcept {
  switch (p) {
    case Problem::Gauss1D: return "gauss1d";
    case Problem::GaussMultiD: return "gauss_multid";
    case Problem::UniformLoc: return "uniform_loc";
  }
  return "unknown";
}

std::optional<Problem> problem_from_string(std::string_view name) noexcept {
  for (Problem p : {Problem::Gauss1D, Problem::GaussMultiD, Problem::UniformLoc})
    if (to_string(p) == name) return p;
  return std::nullopt;
}

ProblemSetup default_problem(Problem problem, Index dim) {
  ProblemSetup s;
  s.problem = problem;
  auto& c = s.contamination;
  c.n = 200;
  switch (problem) {
    case Problem::Gauss1D:
      dim = 1;
      [[fallthrough]];
    case Problem::GaussMultiD:
      require(dim >= 1, "default_problem: dim must be >= 1");
      c.inlier = ModelSpec::gaussian(dim, 1.0);
      c.theta0 = Vector::Constant(dim, 2.0);
      c.outlier = OutlierKind::CauchyStd;
      s.estimators = {Estimator::Mmd, Estimator::MleMean, Estimator::ComponentwiseMedian};
      s.vi.estimator = GradEstimator::ScoreFunction;
      break;
    case Problem::UniformLoc:
      dim = 1;
      c.inlier = ModelSpec::uniform(1, 0.5);
      c.theta0 = Vector::Constant(1, 1.0);
      c.outlier = OutlierKind::GaussianFixed;
      c.outlier_mean = 20.0;
      c.outlier_variance = 1.0;
      s.estimators = {Estimator::Mmd, Estimator::Midrange, Estimator::MomentsMean};
      s.vi.estimator = GradEstimator::UniformClosedForm;
      break;
  }
  s.kernel = GaussianKernel::for_dimension(dim);
  s.vi.record_objective = false;
  return s;
}

std::vector<double> default_epsilons() {
  std::vector<double> eps;
  for (int i = 0; i <= 8; ++i) eps.push_back(0.025 * i);
  return eps;
}

const SweepCell& SweepResult::cell(std::size_t eps_index, Estimator e) const {
  for (std::size_t k = 0; k < estimators.size(); ++k)
    if (estimators[k] == e) return cells.at(eps_index * estimators.size() + k);
  throw std::out_of_range("SweepResult::cell: estimator not part of this sweep");
}

std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t eps_index, Index repetition) noexcept {
  return derive_seed(master_seed, (static_cast<std::uint64_t>(eps_index) << 32) |
                                      static_cast<std::uint64_t>(repetition));
}

SweepResult run_sweep(const SweepOptions& options) {
  const ProblemSetup& setup = options.setup;
  require(options.repetitions >= 1, "run_sweep: repetitions must be >= 1");
  require(!options.epsilons.empty(), "run_sweep: empty epsilon grid");
  require(!setup.estimators.empty(), "run_sweep: no estimators");
  for (double e : options.epsilons)
    require(e >= 0.0 && e < 0.5, "run_sweep: epsilons must lie in [0, 0.5)");
  setup.contamination.validate();
  setup.vi.validate();

  const std::size_t n_eps = options.epsilons.size();
  const std::size_t n_est = setup.estimators.size();
  const auto reps = static_cast<std::size_t>(options.repetitions);
  const std::size_t n_tasks = n_eps * reps;
  // errors[task * n_est + k]
  std::vector<double> errors(n_tasks * n_est, 0.0);

  auto run_task = [&](std::size_t task) {
    const std::size_t e_idx = task / reps;
    const auto rep = static_cast<Index>(task % reps);
    const std::uint64_t seed = cell_seed(options.master_seed, e_idx, rep);
    ContaminationSpec spec = setup.contamination;
    spec.epsilon = options.epsilons[e_idx];
    Rng data_rng(derive_seed(seed, kDataStream));
    const Samples data = generate(spec, data_rng);
    for (std::size_t k = 0; k < n_est; ++k) {
      Vector estimate;
      if (setup.estimators[k] == Estimator::Mmd) {
        PsgaviConfig vi = setup.vi;
        vi.seed = derive_seed(seed, kOptimizerStream);
        MeanFieldGaussian init = default_init(data);
        init.m = project_box(init.m, vi.box_m);
        init.s = project_box(init.s, vi.box_s);
        estimate = psgavi(data, spec.inlier, setup.kernel, vi, init).final.m;
      } else {
        estimate = baseline(setup.estimators[k], data);
      }
      errors[task * n_est + k] = (estimate - spec.theta0).squaredNorm();
    }
  };

  unsigned jobs = options.jobs != 0 ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n_tasks));
  if (jobs <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t t = next.fetch_add(1);
          if (t >= n_tasks || failed.load()) return;
          try {
            run_task(t);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepResult result;
  result.problem = setup.problem;
  result.n = setup.contamination.n;
  result.dim = setup.contamination.inlier.dim;
  result.repetitions = options.repetitions;
  result.master_seed = options.master_seed;
  result.epsilons = options.epsilons;
  result.estimators = setup.estimators;
  for (std::size_t e_idx = 0; e_idx < n_eps; ++e_idx) {
    for (std::size_t k = 0; k < n_est; ++k) {
      SweepCell cell;
      cell.epsilon = options.epsilons[e_idx];
      cell.estimator = setup.estimators[k];
      for (std::size_t r = 0; r < reps; ++r) {
        cell.squared_errors.push_back(errors[(e_idx * reps + r) * n_est + k]);
        cell.seeds.push_back(cell_seed(options.master_seed, e_idx, static_cast<Index>(r)));
      }
      const double mse = mean_of(cell.squared_errors);
      cell.rmse = std::sqrt(mse);
      if (reps >= 2 && cell.rmse > 0.0) {
        double ss = 0.0;
        for (double v : cell.squared_errors) ss += (v - mse) * (v - mse);
        const double sd = std::sqrt(ss / static_cast<double>(reps - 1));
        cell.rmse_stderr = sd / (std::sqrt(static_cast<double>(reps)) * 2.0 * cell.rmse);
      } else {
        cell.rmse_stderr = std::numeric_limits<double>::quiet_NaN();
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

void write_sweep_summary_csv(std::ostream& out, const SweepResult& result) {
  out << "problem,epsilon,estimator,repetitions,rmse,stderr\n";
  for (const auto& c : result.cells) {
    out << to_string(result.problem) << ',' << format_double(c.epsilon) << ',' << to_string(c.estimator)
        << ',' << result.repetitions << ',' << format_double(c.rmse) << ','
        << format_double(c.rmse_stderr) << '\n';
  }
}

void write_sweep_trials_csv(std::ostream& out, const SweepResult& result) {
  out << "problem,epsilon,estimator,trial,squared_error,seed\n";
  for (const auto& c : result.cells) {
    for (std::size_t r = 0; r < c.squared_errors.size(); ++r) {
      out << to_string(result.problem) << ',' << format_double(c.epsilon) << ','
          << to_string(c.estimator) << ',' << r << ',' << format_double(c.squared_errors[r]) << ','
          << c.seeds[r] << '\n';
    }
  }
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fitted_slope: need >= 2 paired points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, "fitted_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace mmdbayes
