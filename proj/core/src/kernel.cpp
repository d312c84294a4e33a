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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmdbayes {

GaussianKernel::GaussianKernel(double gamma2) : gamma2_(gamma2) {
  require(std::isfinite(gamma2) && gamma2 > 0.0, "GaussianKernel: gamma2 must be finite and > 0");
}

GaussianKernel GaussianKernel::for_dimension(Index d) {
  require(d >= 1, "GaussianKernel::for_dimension: d must be >= 1");
  return GaussianKernel(static_cast<double>(d));
}

double GaussianKernel::eval(std::span<const double> x, std::span<const double> y) const {
  require(!x.empty(), "GaussianKernel::eval: empty input");
  require(x.size() == y.size(), "GaussianKernel::eval: dimension mismatch");
  return eval_unchecked(x.data(), y.data(), static_cast<Index>(x.size()));
}

Eigen::MatrixXd GaussianKernel::gram(const Samples& x, const Samples& y) const {
  require(x.cols() == y.cols(), "GaussianKernel::gram: dimension mismatch");
  require(x.cols() >= 1, "GaussianKernel::gram: zero-dimensional samples");
  const Index n = x.rows();
  const Index m = y.rows();
  const Index d = x.cols();
  Eigen::MatrixXd g(n, m);
  for (Index i0 = 0; i0 < n; i0 += kGramBlock) {
    const Index i1 = std::min(n, i0 + kGramBlock);
    for (Index j0 = 0; j0 < m; j0 += kGramBlock) {
      const Index j1 = std::min(m, j0 + kGramBlock);
      for (Index j = j0; j < j1; ++j) {
        const double* yj = y.data() + j * d;
        for (Index i = i0; i < i1; ++i) g(i, j) = eval_unchecked(x.data() + i * d, yj, d);
      }
    }
  }
  return g;
}

double gaussian_embedding_inner(const Vector& theta, const Vector& theta_prime, double sigma2,
                                const GaussianKernel& kernel) {
  require(theta.size() >= 1 && theta.size() == theta_prime.size(),
          "gaussian_embedding_inner: dimension mismatch");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "gaussian_embedding_inner: sigma2 must be > 0");
  const double g2 = kernel.gamma2();
  const double denom = 4.0 * sigma2 + g2;
  const double d = static_cast<double>(theta.size());
  return std::exp(0.5 * d * std::log(g2 / denom) - (theta - theta_prime).squaredNorm() / denom);
}

double gaussian_point_embedding(std::span<const double> x, const Vector& theta, double sigma2,
                                const GaussianKernel& kernel) {
  require(!x.empty() && x.size() == static_cast<std::size_t>(theta.size()),
          "gaussian_point_embedding: dimension mismatch");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "gaussian_point_embedding: sigma2 must be > 0");
  const double g2 = kernel.gamma2();
  const double denom = 2.0 * sigma2 + g2;
  double sq = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = x[j] - theta[static_cast<Index>(j)];
    sq += diff * diff;
  }
  return std::exp(0.5 * static_cast<double>(x.size()) * std::log(g2 / denom) - sq / denom);
}

}  // namespace mmdbayes
