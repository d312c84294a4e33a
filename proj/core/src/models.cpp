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

#include "mmdbayes/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mmdbayes {
namespace {

// (1/(2a)) * integral of exp(-(x - t)^2 / gamma2) for t in [theta - a, theta + a].
double uniform_point_1d_closed(double gamma2, double a, double theta, double x) {
  const double gamma = std::sqrt(gamma2);
  const double up = (theta + a - x) / gamma;
  const double lo = (theta - a - x) / gamma;
  double diff;
  if (lo > 0.0) {
    diff = std::erfc(lo) - std::erfc(up);
  } else if (up < 0.0) {
    diff = std::erfc(-up) - std::erfc(-lo);
  } else {
    diff = std::erf(up) - std::erf(lo);
  }
  return gamma * std::sqrt(std::numbers::pi) * 0.5 * diff / (2.0 * a);
}

double uniform_point_1d_quad(double gamma2, double a, double theta, double x, int nodes) {
  const auto& rule = gauss_legendre(nodes);
  const double v = rule.integrate(
      [&](double t) {
        const double diff = x - t;
        return std::exp(-diff * diff / gamma2);
      },
      theta - a, theta + a);
  return v / (2.0 * a);
}

// (1/(4a^2)) * double integral of K(t - t') over [-a, a]^2
//   = (2 / (4a^2)) * integral_0^{2a} (2a - u) K(u) du.
double uniform_self_1d_closed(double gamma2, double a) {
  const double gamma = std::sqrt(gamma2);
  const double len = 2.0 * a;
  const double inner = len * gamma * std::sqrt(std::numbers::pi) * 0.5 * std::erf(len / gamma) +
                       0.5 * gamma2 * std::expm1(-len * len / gamma2);
  return 2.0 * inner / (len * len);
}

double uniform_self_1d_quad(double gamma2, double a, int nodes) {
  const double len = 2.0 * a;
  const double inner = gauss_legendre(nodes).integrate(
      [&](double u) { return (len - u) * std::exp(-u * u / gamma2); }, 0.0, len);
  return 2.0 * inner / (len * len);
}

void check_theta(const ModelSpec& model, const Vector& theta, const char* where) {
  model.validate();
  require(theta.size() == model.dim, std::string(where) + ": theta dimension mismatch");
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::GaussianLocation: return "gaussian";
    case ModelKind::UniformLocation: return "uniform";
  }
  return "unknown";
}

ModelSpec ModelSpec::gaussian(Index dim, double sigma2) {
  ModelSpec spec{ModelKind::GaussianLocation, dim, sigma2, 0.5};
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::uniform(Index dim, double half_width) {
  ModelSpec spec{ModelKind::UniformLocation, dim, 1.0, half_width};
  spec.validate();
  return spec;
}

void ModelSpec::validate() const {
  require(dim >= 1, "ModelSpec: dim must be >= 1");
  if (kind == ModelKind::GaussianLocation) {
    require(std::isfinite(sigma2) && sigma2 > 0.0, "ModelSpec: sigma2 must be > 0");
  } else {
    require(std::isfinite(half_width) && half_width > 0.0, "ModelSpec: half_width must be > 0");
  }
}

Samples sample(const ModelSpec& model, const Vector& theta, Index n, Rng& rng) {
  check_theta(model, theta, "sample");
  require(n >= 1, "sample: n must be >= 1");
  Samples out(n, model.dim);
  if (model.kind == ModelKind::GaussianLocation) {
    const double sd = std::sqrt(model.sigma2);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < model.dim; ++j) out(i, j) = theta[j] + sd * standard_normal(rng);
  } else {
    const double a = model.half_width;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < model.dim; ++j) out(i, j) = theta[j] + a * (2.0 * uniform01(rng) - 1.0);
  }
  return out;
}

double log_density(const ModelSpec& model, const Vector& theta, std::span<const double> x) {
  check_theta(model, theta, "log_density");
  require(x.size() == static_cast<std::size_t>(model.dim), "log_density: x dimension mismatch");
  const double d = static_cast<double>(model.dim);
  if (model.kind == ModelKind::GaussianLocation) {
    double sq = 0.0;
    for (Index j = 0; j < model.dim; ++j) {
      const double diff = x[j] - theta[j];
      sq += diff * diff;
    }
    return -0.5 * d * std::log(2.0 * std::numbers::pi * model.sigma2) - 0.5 * sq / model.sigma2;
  }
  for (Index j = 0; j < model.dim; ++j) {
    if (std::abs(x[j] - theta[j]) > model.half_width) return -std::numeric_limits<double>::infinity();
  }
  return -d * std::log(2.0 * model.half_width);
}

Vector score(const ModelSpec& model, const Vector& theta, std::span<const double> x) {
  check_theta(model, theta, "score");
  require(x.size() == static_cast<std::size_t>(model.dim), "score: x dimension mismatch");
  if (model.kind != ModelKind::GaussianLocation) {
    throw UnsupportedError(
        "score: the uniform location model has no differentiable log-density; "
        "use uniform_expectation_grad");
  }
  Vector g(model.dim);
  for (Index j = 0; j < model.dim; ++j) g[j] = (x[j] - theta[j]) / model.sigma2;
  return g;
}

double point_expectation(const GaussianKernel& kernel, const ModelSpec& model, const Vector& theta,
                         std::span<const double> x, ExpectationMethod method, int quadrature_nodes) {
  check_theta(model, theta, "point_expectation");
  require(x.size() == static_cast<std::size_t>(model.dim), "point_expectation: x dimension mismatch");
  if (method == ExpectationMethod::MonteCarlo) {
    throw UnsupportedError("point_expectation: Monte Carlo needs an rng; use mmd2_model_vs_empirical");
  }
  if (model.kind == ModelKind::GaussianLocation) {
    if (method == ExpectationMethod::Quadrature)
      throw UnsupportedError("point_expectation: quadrature is only implemented for the uniform model");
    return gaussian_point_embedding(x, theta, model.sigma2, kernel);
  }
  double prod = 1.0;
  for (Index j = 0; j < model.dim; ++j) {
    prod *= method == ExpectationMethod::Quadrature
                ? uniform_point_1d_quad(kernel.gamma2(), model.half_width, theta[j], x[j],
                                        quadrature_nodes)
                : uniform_point_1d_closed(kernel.gamma2(), model.half_width, theta[j], x[j]);
  }
  return prod;
}

double self_expectation(const GaussianKernel& kernel, const ModelSpec& model,
                        ExpectationMethod method, int quadrature_nodes) {
  model.validate();
  if (method == ExpectationMethod::MonteCarlo) {
    throw UnsupportedError("self_expectation: Monte Carlo needs an rng; use mmd2_model_vs_empirical");
  }
  const double d = static_cast<double>(model.dim);
  if (model.kind == ModelKind::GaussianLocation) {
    if (method == ExpectationMethod::Quadrature)
      throw UnsupportedError("self_expectation: quadrature is only implemented for the uniform model");
    const double g2 = kernel.gamma2();
    return std::exp(0.5 * d * std::log(g2 / (4.0 * model.sigma2 + g2)));
  }
  const double one = method == ExpectationMethod::Quadrature
                         ? uniform_self_1d_quad(kernel.gamma2(), model.half_width, quadrature_nodes)
                         : uniform_self_1d_closed(kernel.gamma2(), model.half_width);
  return std::pow(one, d);
}

UniformExpectationGrad uniform_expectation_grad(const GaussianKernel& kernel,
                                                const ModelSpec& model, double m, double s,
                                                double theta_k, double x_i) {
  model.validate();
  if (model.kind != ModelKind::UniformLocation || model.dim != 1) {
    throw UnsupportedError("uniform_expectation_grad: requires the uniform model with d = 1");
  }
  const double d_dm =
      uniform_mean_grad_unchecked(kernel.gamma2(), model.half_width, m + s * theta_k, x_i);
  return {d_dm, theta_k * d_dm};
}

}  // namespace mmdbayes
