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

#include "mmdbayes/csv.hpp"
#include "mmdbayes/mmd.hpp"
#include "mmdbayes/vi.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mmdbayes {
namespace {

Samples gaussian_data(std::uint64_t seed, Index n, double mu = 2.0) {
  Rng rng(seed);
  return sample(ModelSpec::gaussian(1, 1.0), Vector::Constant(1, mu), n, rng);
}

MeanFieldGaussian q1(double m, double s) { return {Vector::Constant(1, m), Vector::Constant(1, s)}; }

TEST(KlToStandardPrior, LiteralFormula) {
  const MeanFieldGaussian q{Vector{{0.5, -1.0}}, Vector{{2.0, 0.3}}};
  const double expected = 0.5 * ((0.25 + 4.0 - std::log(4.0) - 1.0) + (1.0 + 0.09 - std::log(0.09) - 1.0));
  EXPECT_NEAR(kl_to_standard_prior(q), expected, 1e-14);
  EXPECT_EQ(kl_to_standard_prior(q1(0.0, 1.0)), 0.0);
}

TEST(ProjectBox, MatchesGridSearch) {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const double lo = -2.0 + 2.0 * uniform01(rng), hi = lo + 0.1 + 2.0 * uniform01(rng);
    const Vector v{{-4.0 + 8.0 * uniform01(rng), -4.0 + 8.0 * uniform01(rng)}};
    const Vector p = project_box(v, lo, hi);
    const int g = 400;
    double best = INFINITY;
    Vector arg(2);
    for (int i = 0; i <= g; ++i)
      for (int j = 0; j <= g; ++j) {
        const Vector c{{lo + (hi - lo) * i / g, lo + (hi - lo) * j / g}};
        const double dist = (c - v).squaredNorm();
        if (dist < best) best = dist, arg = c;
      }
    EXPECT_LE((p - arg).lpNorm<Eigen::Infinity>(), (hi - lo) / g + 1e-12);
    EXPECT_LE((p - v).squaredNorm(), best + 1e-12);
  }
  EXPECT_THROW(project_box(Vector::Zero(1), 1.0, 0.0), std::invalid_argument);
}

TEST(DefaultInit, MedianWithUnitScale) {
  Samples odd(3, 1);
  odd << 5.0, 1.0, 3.0;
  EXPECT_EQ(default_init(odd).m[0], 3.0);
  Samples even(4, 2);
  even << 1, 10, 2, 20, 3, 30, 100, 40;
  const MeanFieldGaussian q = default_init(even);
  EXPECT_EQ(q.m[0], 2.5);
  EXPECT_EQ(q.m[1], 25.0);
  EXPECT_EQ(q.s, Vector::Ones(2));
  EXPECT_THROW(default_init(Samples(0, 1)), std::invalid_argument);
}

TEST(PsgaviConfig, Validation) {
  PsgaviConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.inv_beta(), 0.0);
  c.mc_batch = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.iterations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.box_s = {0.0, 1.0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.beta_log = std::nan("");
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.beta_log = 0.0;
  EXPECT_EQ(c.inv_beta(), 1.0);
}

TEST(RegularizerGrad, MatchesFiniteDifferencesOfKl) {
  PsgaviConfig c;
  c.beta_log = std::log(3.0);
  const MeanFieldGaussian q = q1(0.7, 0.4);
  const Gradient g = regularizer_grad(q, c);
  const double h = 1e-6;
  EXPECT_NEAR(g.g_m[0], (kl_to_standard_prior(q1(0.7 + h, 0.4)) - kl_to_standard_prior(q1(0.7 - h, 0.4))) / (2 * h) / 3.0, 1e-8);
  EXPECT_NEAR(g.g_s[0], (kl_to_standard_prior(q1(0.7, 0.4 + h)) - kl_to_standard_prior(q1(0.7, 0.4 - h))) / (2 * h) / 3.0, 1e-8);
  c.beta_log = INFINITY;
  EXPECT_EQ(regularizer_grad(q, c).g_m[0], 0.0);
}

TEST(BetaSentinel, HugeFiniteBetaEqualsInfinity) {
  const Samples data = gaussian_data(2, 30);
  const ModelSpec model = ModelSpec::gaussian(1);
  const GaussianKernel k(1.0);
  PsgaviConfig inf_cfg, big_cfg;
  big_cfg.beta_log = 200.0 * 30.0;  // beta = e^{nd}, far beyond double range
  for (const GradMode mode : {GradMode::PerParticle, GradMode::SharedSample}) {
    inf_cfg.grad_mode = big_cfg.grad_mode = mode;
    Rng a(9), b(9);
    const Gradient ga = grad_estimate(q1(1.5, 0.5), data, model, k, inf_cfg, a);
    const Gradient gb = grad_estimate(q1(1.5, 0.5), data, model, k, big_cfg, b);
    EXPECT_EQ(ga.g_m, gb.g_m);
    EXPECT_EQ(ga.g_s, gb.g_s);
  }
}

TEST(VariationalObjective, MmdAtMatchesModelVsEmpirical) {
  const Samples data = gaussian_data(3, 25);
  const ModelSpec model = ModelSpec::gaussian(1, 0.8);
  const GaussianKernel k(1.3);
  const VariationalObjective obj(data, model, k);
  Rng rng(0);
  for (const double th : {0.0, 2.0, 3.7})
    EXPECT_NEAR(obj.mmd2_at(Vector::Constant(1, th)),
                mmd2_model_vs_empirical(k, model, Vector::Constant(1, th), data, rng).value, 1e-14);
}

TEST(ObjectiveRn, MatchesQuadratureOfClosedForm) {
  const Samples data = gaussian_data(4, 30);
  const ModelSpec model = ModelSpec::gaussian(1, 1.0);
  const GaussianKernel k(1.0);
  const MeanFieldGaussian q = q1(1.6, 0.7);
  // D^2(P_theta, P_hat_n) written out term by term.
  auto d2 = [&](double th) {
    double cross = 0.0, self = 0.0;
    for (Index i = 0; i < data.rows(); ++i) {
      cross += std::sqrt(1.0 / 3.0) * std::exp(-std::pow(data(i, 0) - th, 2) / 3.0);
      for (Index j = 0; j < data.rows(); ++j) self += std::exp(-std::pow(data(i, 0) - data(j, 0), 2));
    }
    const double n = static_cast<double>(data.rows());
    return std::sqrt(1.0 / 5.0) - 2.0 * cross / n + self / (n * n);
  };
  // Trapezoid rule in z over [-10, 10].
  double integral = 0.0, second = 0.0;
  const int steps = 4000;
  for (int i = 0; i <= steps; ++i) {
    const double z = -10.0 + 20.0 * i / steps;
    const double w = (i == 0 || i == steps ? 0.5 : 1.0) * 20.0 / steps * std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI);
    const double f = d2(1.6 + 0.7 * z);
    integral += w * f;
    second += w * f * f;
  }
  PsgaviConfig c;
  c.mc_batch = 20000;
  const double sd = std::sqrt(second - integral * integral);
  EXPECT_NEAR(objective_rn(q, data, model, k, c), integral, 4.0 * sd / std::sqrt(20000.0));
  // Regularized criterion adds KL / beta exactly.
  PsgaviConfig r = c;
  r.beta_log = std::log(50.0);
  EXPECT_NEAR(objective_rn(q, data, model, k, r) - objective_rn(q, data, model, k, c), kl_to_standard_prior(q) / 50.0,
              1e-12);
}

TEST(GradEstimate, EstimatorModelPairing) {
  const Samples data = gaussian_data(5, 10);
  const GaussianKernel k(1.0);
  Rng rng(1);
  PsgaviConfig c;
  EXPECT_THROW(grad_estimate(q1(1, 1), data, ModelSpec::uniform(1), k, c, rng), UnsupportedError);
  c.estimator = GradEstimator::UniformClosedForm;
  EXPECT_THROW(grad_estimate(q1(1, 1), data, ModelSpec::gaussian(1), k, c, rng), UnsupportedError);
  c = {};
  c.mc_batch = 1;
  EXPECT_THROW(grad_estimate(q1(1, 1), data, ModelSpec::gaussian(1), k, c, rng), std::invalid_argument);
  c = {};
  c.draws_per_particle = 1;
  EXPECT_THROW(grad_estimate(q1(1, 1), data, ModelSpec::gaussian(1), k, c, rng), std::invalid_argument);
  EXPECT_THROW(grad_estimate(q1(1, -1), data, ModelSpec::gaussian(1), k, PsgaviConfig{}, rng), std::invalid_argument);
}

TEST(GradEstimate, UniformClosedFormAtPointMass) {
  // With s -> 0 every particle sits at m, so the estimate is exact:
  // g_m = -(2/n) sum_i (K(m + a - x_i) - K(m - a - x_i)) / (2a).
  Rng drng(6);
  const ModelSpec u = ModelSpec::uniform(1, 0.5);
  const Samples data = sample(u, Vector::Constant(1, 1.0), 50, drng);
  PsgaviConfig c;
  c.estimator = GradEstimator::UniformClosedForm;
  Rng rng(2);
  const double m = 1.3;
  const Gradient g = grad_estimate(q1(m, 1e-9), data, u, GaussianKernel(1.0), c, rng);
  double acc = 0.0;
  for (Index i = 0; i < 50; ++i)
    acc += (std::exp(-std::pow(m + 0.5 - data(i, 0), 2)) - std::exp(-std::pow(m - 0.5 - data(i, 0), 2))) / 1.0;
  EXPECT_NEAR(g.g_m[0], -2.0 * acc / 50.0, 1e-8);
}

TEST(GradEstimate, SharedSampleIsFiniteAndDeterministic) {
  const Samples data = gaussian_data(7, 40);
  PsgaviConfig c;
  c.grad_mode = GradMode::SharedSample;
  Rng a(3), b(3);
  const Gradient ga = grad_estimate(q1(1.0, 0.5), data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, a);
  const Gradient gb = grad_estimate(q1(1.0, 0.5), data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, b);
  EXPECT_TRUE(ga.g_m.allFinite() && ga.g_s.allFinite());
  EXPECT_EQ(ga.g_m, gb.g_m);
  // Descent direction: m below the data pulls the gradient negative on average.
  double mean = 0.0;
  for (int r = 0; r < 200; ++r) {
    Rng rr(100 + r);
    mean += grad_estimate(q1(1.0, 0.1), data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, rr).g_m[0];
  }
  EXPECT_LT(mean / 200, 0.0);
}

TEST(Psgavi, DeterministicTraceWithExpectedShape) {
  const Samples data = gaussian_data(8, 60);
  PsgaviConfig c;
  c.iterations = 50;
  const auto run = [&](std::uint64_t seed) {
    PsgaviConfig cc = c;
    cc.seed = seed;
    return psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), cc, default_init(data));
  };
  const PsgaviTrace a = run(1), b = run(1), other = run(2);
  ASSERT_EQ(a.records.size(), 51u);
  EXPECT_TRUE(std::isnan(a.records[0].grad_norm_m));
  EXPECT_EQ(a.records[0].m, default_init(data).m);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    ASSERT_EQ(a.records[i].m, b.records[i].m);
    ASSERT_EQ(a.records[i].s, b.records[i].s);
    ASSERT_EQ(a.records[i].objective, b.records[i].objective);
  }
  EXPECT_EQ(a.final.m, a.records.back().m);
  EXPECT_NE(a.final.m, other.final.m);
}

TEST(Psgavi, IteratesStayInsideBoxes) {
  const Samples data = gaussian_data(9, 60);
  PsgaviConfig c;
  c.iterations = 100;
  c.box_m = {1.0, 1.2};
  c.box_s = {0.5, 0.6};
  const MeanFieldGaussian init = q1(1.1, 0.55);
  const PsgaviTrace t = psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, init);
  for (const auto& r : t.records) {
    ASSERT_GE(r.m[0], 1.0);
    ASSERT_LE(r.m[0], 1.2);
    ASSERT_GE(r.s[0], 0.5);
    ASSERT_LE(r.s[0], 0.6);
  }
  EXPECT_THROW(psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, q1(2.0, 0.55)), std::invalid_argument);
}

TEST(Psgavi, InvariantToRowPermutation) {
  Samples data = gaussian_data(10, 50);
  data(3, 0) = 40.0;
  PsgaviConfig c;
  c.iterations = 80;
  const auto a = psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, default_init(data));
  Samples shuffled = data;
  std::vector<Index> order(50);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  std::swap(order[0], order[17]);
  for (Index i = 0; i < 50; ++i) shuffled.row(i) = data.row(order[static_cast<std::size_t>(i)]);
  const auto b = psgavi(shuffled, ModelSpec::gaussian(1), GaussianKernel(1.0), c, default_init(shuffled));
  EXPECT_EQ(a.final.m, b.final.m);
  EXPECT_EQ(a.final.s, b.final.s);
}

TEST(Psgavi, ObjectiveDecreases) {
  const Samples data = gaussian_data(11, 100);
  PsgaviConfig c;
  c.iterations = 300;
  const PsgaviTrace t = psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, q1(0.0, 2.0));
  double tail = 0.0;
  for (std::size_t i = t.records.size() - 50; i < t.records.size(); ++i) tail += t.records[i].objective;
  EXPECT_LT(tail / 50.0, 0.5 * t.records.front().objective);
}

TEST(Psgavi, CleanDataConvergesInMostRuns) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Samples data = gaussian_data(1000 + seed, 200);
    PsgaviConfig c;
    c.seed = seed;
    c.record_objective = false;
    const auto t = psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, default_init(data));
    hits += std::abs(t.final.m[0] - 2.0) < 0.25;
  }
  EXPECT_GE(hits, 95);
}

TEST(Psgavi, UniformModelRecoversLocation) {
  Rng rng(12);
  const ModelSpec u = ModelSpec::uniform(1, 0.5);
  Samples data = sample(u, Vector::Constant(1, 1.0), 200, rng);
  for (Index i = 0; i < 40; ++i) data(i, 0) = 20.0 + standard_normal(rng);
  PsgaviConfig c;
  c.estimator = GradEstimator::UniformClosedForm;
  c.record_objective = false;
  const auto t = psgavi(data, u, GaussianKernel(1.0), c, default_init(data));
  EXPECT_NEAR(t.final.m[0], 1.0, 0.2);
}

TEST(TraceCsv, RoundTrip) {
  const Samples data = gaussian_data(13, 30);
  PsgaviConfig c;
  c.iterations = 10;
  const PsgaviTrace t = psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), c, default_init(data));
  std::stringstream s;
  write_trace_csv(s, t);
  const CsvTable table = read_table(s);
  ASSERT_EQ(table.header, (std::vector<std::string>{"t", "m_0", "s_0", "objective", "grad_norm_m", "grad_norm_s"}));
  ASSERT_EQ(table.rows.size(), 11u);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    EXPECT_EQ(parse_double(table.rows[i][1]), t.records[i].m[0]);
    EXPECT_EQ(parse_double(table.rows[i][2]), t.records[i].s[0]);
    EXPECT_EQ(parse_double(table.rows[i][3]), t.records[i].objective);
  }
  EXPECT_EQ(table.rows[0][4], "NA");
}

}  // namespace
}  // namespace mmdbayes
