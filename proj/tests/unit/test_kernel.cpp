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

#include "mmdbayes/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace mmdbayes {
namespace {

using boost::math::quadrature::gauss_kronrod;

double normal_pdf(double x, double mu, double var) {
  return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * M_PI * var);
}

TEST(GaussianKernel, MatchesLiteralExponential) {
  const GaussianKernel k(2.0);
  const Vector x{{1.0, 2.0}};
  const Vector y{{0.0, 0.5}};
  EXPECT_DOUBLE_EQ(k.eval(x, y), std::exp(-(1.0 + 2.25) / 2.0));
  EXPECT_DOUBLE_EQ(k.eval(x, y), k.eval(y, x));
  EXPECT_DOUBLE_EQ(k.eval(x, x), 1.0);
}

TEST(GaussianKernel, RejectsBadInput) {
  EXPECT_THROW(GaussianKernel(0.0), std::invalid_argument);
  EXPECT_THROW(GaussianKernel(-1.0), std::invalid_argument);
  EXPECT_THROW(GaussianKernel(std::nan("")), std::invalid_argument);
  EXPECT_THROW(GaussianKernel{std::numeric_limits<double>::infinity()}, std::invalid_argument);
  const GaussianKernel k(1.0);
  EXPECT_THROW(k.eval(Vector::Zero(2), Vector::Zero(3)), std::invalid_argument);
  EXPECT_THROW(k.eval(Vector(), Vector()), std::invalid_argument);
}

TEST(GaussianKernel, DefaultBandwidthIsDimension) {
  EXPECT_DOUBLE_EQ(GaussianKernel::for_dimension(3).gamma2(), 3.0);
  EXPECT_DOUBLE_EQ(GaussianKernel::for_dimension(15).gamma2(), 15.0);
}

TEST(GaussianKernel, TiledGramMatchesDoubleLoop) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  Samples x(300, 2), y(270, 2);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = nd(gen);
  for (Index i = 0; i < y.size(); ++i) y.data()[i] = nd(gen);
  const GaussianKernel k(1.7);
  const Eigen::MatrixXd g = k.gram(x, y);
  ASSERT_EQ(g.rows(), 300);
  ASSERT_EQ(g.cols(), 270);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < y.rows(); ++j) {
      const double d0 = x(i, 0) - y(j, 0), d1 = x(i, 1) - y(j, 1);
      ASSERT_NEAR(g(i, j), std::exp(-(d0 * d0 + d1 * d1) / 1.7), 1e-15);
    }
}

TEST(GaussianEmbedding, InnerProductMatchesDoubleIntegral) {
  for (const auto& [t, tp, s2, g2] : {std::tuple{0.0, 0.0, 1.0, 1.0}, std::tuple{0.3, 1.9, 0.5, 2.0},
                                      std::tuple{-1.0, 2.0, 2.0, 0.7}}) {
    auto inner = [&](double x) {
      auto f = [&](double y) { return normal_pdf(y, tp, s2) * std::exp(-(x - y) * (x - y) / g2); };
      return normal_pdf(x, t, s2) * gauss_kronrod<double, 61>::integrate(f, tp - 15.0, tp + 15.0, 15, 1e-13);
    };
    const double oracle = gauss_kronrod<double, 61>::integrate(inner, t - 15.0, t + 15.0, 15, 1e-13);
    EXPECT_NEAR(gaussian_embedding_inner(Vector::Constant(1, t), Vector::Constant(1, tp), s2, GaussianKernel(g2)),
                oracle, 1e-11);
  }
}

TEST(GaussianEmbedding, FactorizesOverCoordinates) {
  const GaussianKernel k(1.3);
  const Vector a{{0.2, -1.0, 0.7}}, b{{1.0, 0.4, 0.0}};
  double prod = 1.0;
  for (int j = 0; j < 3; ++j) prod *= gaussian_embedding_inner(Vector::Constant(1, a[j]), Vector::Constant(1, b[j]), 0.8, k);
  EXPECT_NEAR(gaussian_embedding_inner(a, b, 0.8, k), prod, 1e-15);
}

TEST(GaussianEmbedding, PointEmbeddingMatchesIntegral) {
  const double x = 1.2, theta = -0.4, s2 = 0.6, g2 = 1.5;
  auto f = [&](double u) { return normal_pdf(u, theta, s2) * std::exp(-(x - u) * (x - u) / g2); };
  const double oracle = gauss_kronrod<double, 61>::integrate(f, theta - 15.0, theta + 15.0, 15, 1e-13);
  const std::vector<double> xv{x};
  EXPECT_NEAR(gaussian_point_embedding(xv, Vector::Constant(1, theta), s2, GaussianKernel(g2)), oracle, 1e-12);
}

TEST(GaussianEmbedding, FiniteInHighDimension) {
  const GaussianKernel k = GaussianKernel::for_dimension(400);
  const double v = gaussian_embedding_inner(Vector::Zero(400), Vector::Ones(400), 1.0, k);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(v, 0.0);
}

}  // namespace
}  // namespace mmdbayes
