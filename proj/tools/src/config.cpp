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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace mmdbayes::cli {
namespace {

const std::vector<std::string> kViKeys{
    "beta_log",  "mc_batch", "draws_per_particle", "iterations", "step_scale", "box_m_lo",
    "box_m_hi",  "box_s_lo", "box_s_hi",           "grad_mode",  "grad_estimator", "gamma2", "seed",
};

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool has(const Json& c, const char* key) { return c.contains(key) && !c.at(key).is_null(); }

double number(const Json& c, const char* key, double fallback) {
  if (!has(c, key)) return fallback;
  const Json& v = c.at(key);
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

Index count(const Json& c, const char* key, Index fallback) {
  if (!has(c, key)) return fallback;
  const Json& v = c.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<Index>();
}

std::string text(const Json& c, const char* key, std::string fallback) {
  if (!has(c, key)) return fallback;
  const Json& v = c.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t seed_of(const Json& c, std::uint64_t fallback) {
  if (!has(c, "seed")) return fallback;
  const Json& v = c.at("seed");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    try {
      std::size_t pos = 0;
      const unsigned long long x = std::stoull(s, &pos);
      if (pos == s.size() && s.find('-') == std::string::npos) return x;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("'seed' must be an unsigned 64-bit integer");
}

std::vector<double> number_list(const Json& c, const char* key) {
  const Json& v = c.at(key);
  std::vector<double> out;
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
  for (const Json& e : v) {
    if (!e.is_number()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void apply_vi(const Json& c, PsgaviConfig& vi) {
  vi.beta_log = number(c, "beta_log", vi.beta_log);
  if (has(c, "mc_batch")) vi.mc_batch = count(c, "mc_batch", 0);
  vi.draws_per_particle = count(c, "draws_per_particle", vi.draws_per_particle);
  vi.iterations = count(c, "iterations", vi.iterations);
  vi.step.scale = number(c, "step_scale", vi.step.scale);
  vi.box_m = {number(c, "box_m_lo", vi.box_m.lo), number(c, "box_m_hi", vi.box_m.hi)};
  vi.box_s = {number(c, "box_s_lo", vi.box_s.lo), number(c, "box_s_hi", vi.box_s.hi)};
  if (has(c, "grad_mode")) {
    const std::string m = text(c, "grad_mode", "");
    if (m == to_string(GradMode::PerParticle)) vi.grad_mode = GradMode::PerParticle;
    else if (m == to_string(GradMode::SharedSample)) vi.grad_mode = GradMode::SharedSample;
    else throw ConfigError("'grad_mode' must be per_particle or shared_sample");
  }
  if (has(c, "grad_estimator")) {
    const std::string e = text(c, "grad_estimator", "");
    if (e == to_string(GradEstimator::ScoreFunction)) vi.estimator = GradEstimator::ScoreFunction;
    else if (e == to_string(GradEstimator::UniformClosedForm)) vi.estimator = GradEstimator::UniformClosedForm;
    else throw ConfigError("'grad_estimator' must be score_function or uniform_closed_form");
  }
  try {
    vi.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Problem problem_of(const Json& c) {
  const std::string name = text(c, "problem", "gauss1d");
  const auto p = problem_from_string(name);
  if (!p) throw ConfigError("unknown problem '" + name + "' (gauss1d, gauss_multid, uniform_loc)");
  return *p;
}

GaussianKernel kernel_of(const Json& c, Index dim) {
  const double g2 = number(c, "gamma2", static_cast<double>(dim));
  if (!(std::isfinite(g2) && g2 > 0.0)) throw ConfigError("'gamma2' must be > 0");
  return GaussianKernel(g2);
}

// Problem defaults with the generator keys applied.
ProblemSetup setup_of(const Json& c) {
  const Problem p = problem_of(c);
  const Index dim = count(c, "dim", 15);
  if (dim < 1) throw ConfigError("'dim' must be >= 1");
  if (p != Problem::GaussMultiD && has(c, "dim")) throw ConfigError("'dim' only applies to gauss_multid");
  ProblemSetup s = default_problem(p, dim);
  auto& g = s.contamination;
  g.n = count(c, "n", g.n);
  if (g.n < 1) throw ConfigError("'n' must be >= 1");
  if (has(c, "theta0")) g.theta0 = Vector::Constant(g.inlier.dim, number(c, "theta0", 0.0));
  g.epsilon = number(c, "epsilon", 0.0);
  s.kernel = kernel_of(c, g.inlier.dim);
  return s;
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config " + path + ": top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) throw ConfigError("config key '" + key + "': nested objects are not allowed");
    if (value.is_array())
      for (const Json& e : value)
        if (e.is_structured()) throw ConfigError("config key '" + key + "': arrays must hold scalars");
  }
  return j;
}

void apply_override(Json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  Json parsed = Json::parse(value, nullptr, false);
  config[key] = parsed.is_discarded() ? Json(value) : parsed;
}

void check_keys(const Json& config, const std::vector<std::string>& allowed, std::string_view command) {
  for (const auto& [key, value] : config.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown config key '" + key + "' for " + std::string(command));
  }
}

std::vector<std::string> estimate_keys() {
  return join({"data", "model", "sigma2", "half_width", "problem", "dim", "n", "theta0", "epsilon"}, kViKeys);
}

std::vector<std::string> sweep_keys() {
  return join({"problem", "dim", "n", "theta0", "epsilons", "repetitions", "estimators", "jobs"}, kViKeys);
}

std::vector<std::string> theory_keys() { return {"n", "d", "sigma2", "gamma2", "theta_star_norm"}; }

std::vector<std::string> verify_keys() { return {"seed", "trials", "sample_sizes"}; }

EstimateSettings estimate_settings(const Json& c) {
  check_keys(c, estimate_keys(), "estimate");
  EstimateSettings s;
  s.vi.seed = seed_of(c, kDefaultSeed);
  if (has(c, "data")) {
    for (const char* k : {"problem", "dim", "n", "theta0", "epsilon"})
      if (has(c, k)) throw ConfigError(std::string("'") + k + "' only applies to generated data, not with 'data'");
    s.data_path = text(c, "data", "");
    const std::string model = text(c, "model", "gaussian");
    if (model == "gaussian") {
      s.model = ModelSpec::gaussian(1, number(c, "sigma2", 1.0));
    } else if (model == "uniform") {
      s.model = ModelSpec::uniform(1, number(c, "half_width", 0.5));
      s.vi.estimator = GradEstimator::UniformClosedForm;
    } else {
      throw ConfigError("'model' must be gaussian or uniform");
    }
    // dim, and with it the default gamma2, is known once the file is read
    s.gamma2_given = has(c, "gamma2");
    if (s.gamma2_given) s.kernel = kernel_of(c, 1);
  } else {
    for (const char* k : {"model", "sigma2", "half_width"})
      if (has(c, k)) throw ConfigError(std::string("'") + k + "' only applies together with 'data'");
    const ProblemSetup setup = setup_of(c);
    s.generator = setup.contamination;
    s.model = setup.contamination.inlier;
    s.kernel = setup.kernel;
    s.vi.estimator = setup.vi.estimator;
    try {
      s.generator.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    s.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  apply_vi(c, s.vi);
  return s;
}

SweepOptions sweep_settings(const Json& c) {
  check_keys(c, sweep_keys(), "sweep");
  SweepOptions o;
  o.setup = setup_of(c);
  o.master_seed = seed_of(c, kDefaultSeed);
  if (has(c, "epsilons")) o.epsilons = number_list(c, "epsilons");
  if (o.epsilons.empty()) throw ConfigError("'epsilons' must not be empty");
  for (double e : o.epsilons)
    if (!(e >= 0.0 && e < 0.5)) throw ConfigError("'epsilons' must lie in [0, 0.5)");
  o.repetitions = count(c, "repetitions", o.repetitions);
  if (o.repetitions < 1) throw ConfigError("'repetitions' must be >= 1");
  const Index jobs = count(c, "jobs", 0);
  if (jobs < 0) throw ConfigError("'jobs' must be >= 0");
  o.jobs = static_cast<unsigned>(jobs);
  if (has(c, "estimators")) {
    const Json& v = c.at("estimators");
    if (!v.is_array() || v.empty()) throw ConfigError("'estimators' must be a non-empty array of names");
    o.setup.estimators.clear();
    for (const Json& e : v) {
      const auto est = e.is_string() ? estimator_from_string(e.get<std::string>()) : std::nullopt;
      if (!est) throw ConfigError("unknown estimator " + e.dump());
      o.setup.estimators.push_back(*est);
    }
  }
  apply_vi(c, o.setup.vi);
  return o;
}

TheoryInputs theory_settings(const Json& c) {
  check_keys(c, theory_keys(), "theory");
  TheoryInputs in;
  in.n = number(c, "n", 200.0);
  in.d = count(c, "d", 1);
  in.sigma2 = number(c, "sigma2", 1.0);
  in.gamma2 = number(c, "gamma2", static_cast<double>(in.d));
  in.theta_star_norm = number(c, "theta_star_norm", 0.0);
  try {
    in.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return in;
}

VerifySettings verify_settings(const Json& c) {
  check_keys(c, verify_keys(), "verify");
  VerifySettings v;
  v.seed = seed_of(c, v.seed);
  v.trials = count(c, "trials", v.trials);
  if (v.trials < 100) throw ConfigError("'trials' must be >= 100");
  if (has(c, "sample_sizes")) {
    v.sample_sizes.clear();
    for (double x : number_list(c, "sample_sizes")) {
      if (!(x >= 1.0 && x == std::floor(x))) throw ConfigError("'sample_sizes' must be positive integers");
      v.sample_sizes.push_back(static_cast<Index>(x));
    }
  }
  return v;
}

}  // namespace mmdbayes::cli
