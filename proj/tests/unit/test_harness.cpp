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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

namespace mmdbayes {
namespace {

ContaminationSpec uniform_with_far_outliers(double eps) {
  ContaminationSpec s;
  s.epsilon = eps;
  s.inlier = ModelSpec::uniform(1, 0.5);
  s.theta0 = Vector::Constant(1, 1.0);
  s.outlier = OutlierKind::GaussianFixed;
  s.outlier_mean = 20.0;
  s.outlier_variance = 1.0;
  return s;
}

Index count_above(const Samples& x, double t) { return (x.array() > t).count(); }

TEST(Generate, OutlierCountAndDeterminism) {
  Rng a(1), b(1);
  const Samples x = generate(uniform_with_far_outliers(0.2), a);
  EXPECT_EQ(x.rows(), 200);
  EXPECT_EQ(count_above(x, 10.0), 40);
  EXPECT_EQ(x, generate(uniform_with_far_outliers(0.2), b));
  Rng c(2);
  const Samples clean = generate(uniform_with_far_outliers(0.0), c);
  EXPECT_GE(clean.minCoeff(), 0.5);
  EXPECT_LE(clean.maxCoeff(), 1.5);
  EXPECT_EQ(uniform_with_far_outliers(0.025).outlier_count(), 5);
  ContaminationSpec odd = uniform_with_far_outliers(0.1);
  odd.n = 15;
  EXPECT_EQ(odd.outlier_count(), 1);
}

TEST(Generate, OutliersAreShuffled) {
  Rng rng(3);
  const Samples x = generate(uniform_with_far_outliers(0.2), rng);
  // Not all outliers sit in the last rows.
  EXPECT_LT(count_above(x.bottomRows(40), 10.0), 40);
}

TEST(Generate, RejectsInvalidSpec) {
  Rng rng(4);
  EXPECT_THROW(generate(uniform_with_far_outliers(0.5), rng), std::invalid_argument);
  ContaminationSpec s = uniform_with_far_outliers(0.1);
  s.theta0 = Vector::Zero(2);
  EXPECT_THROW(generate(s, rng), std::invalid_argument);
}

TEST(Baseline, ReferenceValues) {
  Samples a(3, 1), b(3, 1), c(3, 1);
  a << 1, 2, 3;
  b << 1, 2, 100;
  c << 0.4, 1.0, 1.6;
  EXPECT_DOUBLE_EQ(baseline(Estimator::MleMean, a)[0], 2.0);
  EXPECT_DOUBLE_EQ(baseline(Estimator::MomentsMean, a)[0], 2.0);
  EXPECT_DOUBLE_EQ(baseline(Estimator::ComponentwiseMedian, b)[0], 2.0);
  EXPECT_DOUBLE_EQ(baseline(Estimator::Midrange, c)[0], 1.0);
  Samples even(4, 1);
  even << 4, 1, 3, 2;
  EXPECT_DOUBLE_EQ(baseline(Estimator::ComponentwiseMedian, even)[0], 2.5);
  EXPECT_THROW(baseline(Estimator::Mmd, a), std::invalid_argument);
  EXPECT_THROW(baseline(Estimator::MleMean, Samples(0, 1)), std::invalid_argument);
}

TEST(Baseline, PermutationInvariant) {
  Rng rng(5);
  const Samples x = generate(uniform_with_far_outliers(0.1), rng);
  const Samples rev = x.colwise().reverse();
  for (const Estimator e : {Estimator::MleMean, Estimator::ComponentwiseMedian, Estimator::MomentsMean, Estimator::Midrange})
    EXPECT_NEAR(baseline(e, x)[0], baseline(e, rev)[0], 1e-12);
}

TEST(Names, RoundTrip) {
  for (const Estimator e : {Estimator::Mmd, Estimator::MleMean, Estimator::ComponentwiseMedian, Estimator::MomentsMean,
                            Estimator::Midrange})
    EXPECT_EQ(estimator_from_string(to_string(e)), e);
  for (const Problem p : {Problem::Gauss1D, Problem::GaussMultiD, Problem::UniformLoc})
    EXPECT_EQ(problem_from_string(to_string(p)), p);
  EXPECT_FALSE(estimator_from_string("mean").has_value());
  EXPECT_FALSE(problem_from_string("gauss").has_value());
}

TEST(DefaultProblem, StudyDefaults) {
  const ProblemSetup g = default_problem(Problem::Gauss1D);
  EXPECT_EQ(g.contamination.n, 200);
  EXPECT_EQ(g.contamination.theta0, Vector::Constant(1, 2.0));
  EXPECT_EQ(g.contamination.outlier, OutlierKind::CauchyStd);
  EXPECT_EQ(g.kernel.gamma2(), 1.0);
  EXPECT_TRUE(std::isinf(g.vi.beta_log));
  EXPECT_EQ(g.estimators.front(), Estimator::Mmd);
  const ProblemSetup m = default_problem(Problem::GaussMultiD);
  EXPECT_EQ(m.contamination.inlier.dim, 15);
  EXPECT_EQ(m.kernel.gamma2(), 15.0);
  EXPECT_EQ(m.contamination.theta0, Vector::Constant(15, 2.0));
  const ProblemSetup u = default_problem(Problem::UniformLoc);
  EXPECT_EQ(u.contamination.inlier.kind, ModelKind::UniformLocation);
  EXPECT_EQ(u.contamination.outlier_mean, 20.0);
  EXPECT_EQ(u.vi.estimator, GradEstimator::UniformClosedForm);
  const auto eps = default_epsilons();
  ASSERT_EQ(eps.size(), 9u);
  EXPECT_DOUBLE_EQ(eps.back(), 0.2);
}

TEST(CellSeed, NoCollisionsAcrossCellsAndStreams) {
  std::set<std::uint64_t> seen;
  std::size_t inserted = 0;
  for (std::size_t e = 0; e < 9; ++e)
    for (Index r = 0; r < 20000; ++r) {
      const std::uint64_t s = cell_seed(20190930, e, r);
      seen.insert(derive_seed(s, 0));
      seen.insert(derive_seed(s, 1));
      inserted += 2;
    }
  EXPECT_EQ(seen.size(), inserted);
}

SweepOptions small_sweep(Problem p, unsigned jobs) {
  SweepOptions o;
  o.setup = default_problem(p, 3);
  o.setup.vi.iterations = 60;
  o.epsilons = {0.0, 0.1};
  o.repetitions = 4;
  o.jobs = jobs;
  return o;
}

TEST(RunSweep, IndependentOfWorkerCount) {
  const SweepResult a = run_sweep(small_sweep(Problem::Gauss1D, 1));
  const SweepResult b = run_sweep(small_sweep(Problem::Gauss1D, 3));
  ASSERT_EQ(a.cells.size(), 6u);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].squared_errors, b.cells[i].squared_errors);
    EXPECT_EQ(a.cells[i].seeds, b.cells[i].seeds);
  }
  std::ostringstream sa, sb;
  write_sweep_summary_csv(sa, a);
  write_sweep_summary_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(RunSweep, AggregatesRmse) {
  const SweepResult r = run_sweep(small_sweep(Problem::UniformLoc, 2));
  for (const auto& c : r.cells) {
    double mse = 0.0;
    for (double v : c.squared_errors) mse += v;
    EXPECT_DOUBLE_EQ(c.rmse, std::sqrt(mse / 4.0));
    EXPECT_TRUE(std::isfinite(c.rmse_stderr));
  }
  EXPECT_EQ(&r.cell(1, Estimator::Midrange), &r.cells[1 * 3 + 1]);
  EXPECT_THROW(r.cell(0, Estimator::MleMean), std::out_of_range);
}

TEST(RunSweep, SingleRepetitionHasNoStderr) {
  SweepOptions o = small_sweep(Problem::Gauss1D, 1);
  o.repetitions = 1;
  const SweepResult r = run_sweep(o);
  std::ostringstream s;
  write_sweep_summary_csv(s, r);
  EXPECT_NE(s.str().find(",1,"), std::string::npos);
  EXPECT_NE(s.str().find(",NA\n"), std::string::npos);
}

TEST(RunSweep, RejectsBadGrid) {
  SweepOptions o = small_sweep(Problem::Gauss1D, 1);
  o.epsilons = {0.6};
  EXPECT_THROW(run_sweep(o), std::invalid_argument);
  o.epsilons = {};
  EXPECT_THROW(run_sweep(o), std::invalid_argument);
  o.epsilons = {0.0};
  o.repetitions = 0;
  EXPECT_THROW(run_sweep(o), std::invalid_argument);
}

TEST(RunSweep, SampleMeanRmseMatchesCentralLimit) {
  SweepOptions o;
  o.setup = default_problem(Problem::Gauss1D);
  o.setup.estimators = {Estimator::MleMean};
  o.epsilons = {0.0};
  o.repetitions = 10000;
  const double rmse = run_sweep(o).cells[0].rmse;
  EXPECT_NEAR(rmse, 1.0 / std::sqrt(200.0), 0.1 / std::sqrt(200.0));
}

TEST(RunSweep, CleanDataEstimatorsNearParametricRate) {
  SweepOptions o;
  o.setup = default_problem(Problem::Gauss1D);
  o.epsilons = {0.0};
  o.repetitions = 100;
  const double rate = 1.0 / std::sqrt(200.0);
  for (const auto& c : run_sweep(o).cells) {
    EXPECT_LT(c.rmse, 2.0 * rate) << to_string(c.estimator);
    EXPECT_GT(c.rmse, 0.5 * rate) << to_string(c.estimator);
  }
}

TEST(RunSweep, MomentsRmseGrowsLinearlyForUniformProblem) {
  SweepOptions o;
  o.setup = default_problem(Problem::UniformLoc);
  o.setup.estimators = {Estimator::MomentsMean, Estimator::Midrange};
  o.repetitions = 200;
  const SweepResult r = run_sweep(o);
  std::vector<double> y;
  for (std::size_t e = 0; e < r.epsilons.size(); ++e) y.push_back(r.cell(e, Estimator::MomentsMean).rmse);
  const double slope = fitted_slope(r.epsilons, y);
  EXPECT_NEAR(slope, 19.0, 2.0);
}

TEST(FittedSlope, ExactLine) {
  EXPECT_NEAR(fitted_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-14);
  EXPECT_THROW(fitted_slope({1}, {1}), std::invalid_argument);
  EXPECT_THROW(fitted_slope({1, 1}, {1, 2}), std::invalid_argument);
}

}  // namespace
}  // namespace mmdbayes
