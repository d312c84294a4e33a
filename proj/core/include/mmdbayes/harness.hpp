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
#include "mmdbayes/vi.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmdbayes {

enum class OutlierKind {
  CauchyStd,      ///< every coordinate i.i.d. standard Cauchy
  GaussianFixed,  ///< N(mean, variance I)
};

/// Contaminated data: n rows from the inlier model, of which floor(epsilon n)
/// are replaced by outliers.
struct ContaminationSpec {
  double epsilon = 0.0;
  ModelSpec inlier;
  Vector theta0;
  OutlierKind outlier = OutlierKind::CauchyStd;
  double outlier_mean = 0.0;
  double outlier_variance = 1.0;
  Index n = 200;

  Index outlier_count() const noexcept;
  void validate() const;
};

/// Draws n inlier rows, overwrites the last floor(epsilon n) with outliers, then
/// applies a Fisher-Yates shuffle. Deterministic given rng state.
Samples generate(const ContaminationSpec& spec, Rng& rng);

enum class Estimator { Mmd, MleMean, ComponentwiseMedian, MomentsMean, Midrange };

std::string_view to_string(Estimator e) noexcept;
std::optional<Estimator> estimator_from_string(std::string_view name) noexcept;

/// Classical location estimators. MleMean and MomentsMean are both the
/// arithmetic mean; Midrange is (min + max) / 2 per coordinate.
/// Throws std::invalid_argument on empty data and for Estimator::Mmd.
Vector baseline(Estimator kind, const Samples& data);

enum class Problem { Gauss1D, GaussMultiD, UniformLoc };

std::string_view to_string(Problem p) noexcept;
std::optional<Problem> problem_from_string(std::string_view name) noexcept;

/// Everything that defines one experiment cell apart from epsilon and the seed.
struct ProblemSetup {
  Problem problem = Problem::Gauss1D;
  ContaminationSpec contamination;  ///< epsilon is overwritten per cell
  GaussianKernel kernel{1.0};
  PsgaviConfig vi;
  std::vector<Estimator> estimators;  ///< Mmd first, then the problem's baselines
};

/// Defaults of the three studies:
///   Gauss1D     theta0 = 2, sigma2 = 1, n = 200, Cauchy outliers
///   GaussMultiD theta0 = (2, ..., 2) in R^dim (dim defaults to 15), Cauchy outliers
///   UniformLoc  theta0 = 1, a = 1/2, n = 200, N(20, 1) outliers, closed-form gradients
/// with gamma2 = d, M = n, eta_t = 1/sqrt(t), beta = +inf.
ProblemSetup default_problem(Problem problem, Index dim = 15);

/// Default epsilon grid 0, 0.025, ..., 0.2.
std::vector<double> default_epsilons();

struct SweepOptions {
  ProblemSetup setup;
  std::vector<double> epsilons = default_epsilons();
  Index repetitions = 100;
  std::uint64_t master_seed = 20190930;
  unsigned jobs = 0;  ///< worker threads; 0 = hardware concurrency
};

struct SweepCell {
  double epsilon = 0.0;
  Estimator estimator = Estimator::Mmd;
  double rmse = 0.0;
  double rmse_stderr = 0.0;          ///< delta-method standard error; NaN for one repetition
  std::vector<double> squared_errors;  ///< one per repetition
  std::vector<std::uint64_t> seeds;
};

struct SweepResult {
  Problem problem = Problem::Gauss1D;
  Index n = 0;
  Index dim = 0;
  Index repetitions = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> epsilons;
  std::vector<Estimator> estimators;
  std::vector<SweepCell> cells;  ///< epsilon-major, estimator-minor

  const SweepCell& cell(std::size_t eps_index, Estimator e) const;
};

/// Seed of the (epsilon index, repetition) cell: derive_seed(master, eps_index * 2^32 + rep).
std::uint64_t cell_seed(std::uint64_t master_seed, std::size_t eps_index, Index repetition) noexcept;

/// Runs every (epsilon, repetition) cell and aggregates RMSE per (epsilon, estimator).
/// Results are identical for any number of jobs.
SweepResult run_sweep(const SweepOptions& options);

/// `problem,epsilon,estimator,repetitions,rmse,stderr`
void write_sweep_summary_csv(std::ostream& out, const SweepResult& result);
/// `problem,epsilon,estimator,trial,squared_error,seed`
void write_sweep_trials_csv(std::ostream& out, const SweepResult& result);

/// Least-squares slope of y on x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mmdbayes
