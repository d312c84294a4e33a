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

#include "cli.hpp"

#include "config.hpp"
#include "svg.hpp"

#include "mmdbayes/csv.hpp"
#include "mmdbayes/mmd.hpp"
#include "mmdbayes/random.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace mmdbayes::cli {
namespace {

namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string out_dir;
  bool svg = false;
  std::string data_path;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json assemble_config(const CommonArgs& a) {
  Json config = a.config_path.empty() ? Json::object() : load_config_file(a.config_path);
  for (const auto& s : a.sets) apply_override(config, s);
  if (a.seed) config["seed"] = *a.seed;
  if (a.jobs) config["jobs"] = *a.jobs;
  if (!a.data_path.empty()) config["data"] = a.data_path;
  return config;
}

fs::path output_dir(const CommonArgs& a) {
  const fs::path dir = a.out_dir.empty() ? fs::path(".") : fs::path(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

std::string join_values(const Vector& v) {
  std::string s;
  for (Index j = 0; j < v.size(); ++j) {
    if (j > 0) s += ';';
    s += format_double(v[j]);
  }
  return s;
}

int cmd_estimate(const CommonArgs& args, std::ostream& out) {
  const EstimateSettings settings = estimate_settings(assemble_config(args));
  ModelSpec model = settings.model;
  GaussianKernel kernel = settings.kernel;
  Samples data;
  if (settings.data_path) {
    data = read_samples_csv_file(*settings.data_path);
    model.dim = data.cols();
    if (!settings.gamma2_given) kernel = GaussianKernel::for_dimension(model.dim);
    if (model.kind == ModelKind::UniformLocation && model.dim != 1)
      throw ConfigError("the uniform model needs one-column data");
  } else {
    Rng rng(derive_seed(settings.vi.seed, 0));
    data = generate(settings.generator, rng);
  }
  MeanFieldGaussian init = default_init(data);
  init.m = project_box(init.m, settings.vi.box_m);
  init.s = project_box(init.s, settings.vi.box_s);
  const PsgaviTrace trace = psgavi(data, model, kernel, settings.vi, init);

  const fs::path dir = output_dir(args);
  write_file_atomic(dir / "trace.csv", render([&](std::ostream& s) { write_trace_csv(s, trace); }));
  write_file_atomic(dir / "estimate.csv", render([&](std::ostream& s) {
                      const Index d = trace.final.dim();
                      for (Index j = 0; j < d; ++j) s << "m_" << j << ',';
                      for (Index j = 0; j < d; ++j) s << "s_" << j << (j + 1 < d ? "," : "\n");
                      for (Index j = 0; j < d; ++j) s << format_double(trace.final.m[j]) << ',';
                      for (Index j = 0; j < d; ++j) s << format_double(trace.final.s[j]) << (j + 1 < d ? "," : "\n");
                    }));
  out << "estimate n=" << data.rows() << " d=" << data.cols() << " model=" << to_string(model.kind)
      << " iterations=" << settings.vi.iterations << " seed=" << settings.vi.seed
      << " m=" << join_values(trace.final.m) << " s=" << join_values(trace.final.s)
      << " objective=" << format_double(trace.records.back().objective) << '\n';
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args, std::ostream& out) {
  const SweepOptions options = sweep_settings(assemble_config(args));
  const SweepResult result = run_sweep(options);
  const fs::path dir = output_dir(args);
  write_file_atomic(dir / "sweep_summary.csv", render([&](std::ostream& s) { write_sweep_summary_csv(s, result); }));
  write_file_atomic(dir / "sweep_trials.csv", render([&](std::ostream& s) { write_sweep_trials_csv(s, result); }));
  if (args.svg) write_file_atomic(dir / "sweep.svg", sweep_svg(result));
  out << "sweep problem=" << to_string(result.problem) << " n=" << result.n << " d=" << result.dim
      << " repetitions=" << result.repetitions << " seed=" << result.master_seed << '\n';
  for (const auto& c : result.cells)
    out << "  epsilon=" << format_double(c.epsilon) << " " << to_string(c.estimator)
        << " rmse=" << format_double(c.rmse) << '\n';
  return kExitOk;
}

int cmd_theory(const CommonArgs& args, std::ostream& out) {
  const TheoryInputs in = theory_settings(assemble_config(args));
  const PriorMassReport r = prior_mass_lower_bound(in);
  const ExtendedPriorMassReport e = extended_prior_mass_construction(in);
  const std::vector<std::pair<std::string, double>> fields{
      {"n", in.n},
      {"d", static_cast<double>(in.d)},
      {"sigma2", in.sigma2},
      {"gamma2", in.gamma2},
      {"theta_star_norm", in.theta_star_norm},
      {"s_n", r.s_n},
      {"exact_ball_radius", exact_ball_radius(in)},
      {"f_theta_star", r.f_theta_star},
      {"log_L", r.log_L},
      {"log_mass_lower_bound", r.log_mass_lower_bound},
      {"mass_lower_bound", r.mass_lower_bound},
      {"beta_min", r.beta_min},
      {"rho_variance", e.rho_variance},
      {"kl_value", e.kl_value},
      {"mmd_integral_bound", e.mmd_integral_bound},
      {"inverse_n", 1.0 / in.n},
      {"beta_min_extended", e.beta_min_extended},
  };
  for (const auto& [k, v] : fields) out << k << " = " << format_double(v) << '\n';
  if (!args.out_dir.empty()) {
    write_file_atomic(output_dir(args) / "theory.csv", render([&](std::ostream& s) {
                        for (std::size_t i = 0; i < fields.size(); ++i)
                          s << fields[i].first << (i + 1 < fields.size() ? "," : "\n");
                        for (std::size_t i = 0; i < fields.size(); ++i)
                          s << format_double(fields[i].second) << (i + 1 < fields.size() ? "," : "\n");
                      }));
  }
  return kExitOk;
}

int cmd_verify(const CommonArgs& args, std::ostream& out) {
  const VerifySettings v = verify_settings(assemble_config(args));
  bool ok = true;
  const GaussianKernel kernel(1.0);
  const ModelSpec model = ModelSpec::gaussian(1, 1.0);
  const Vector theta0 = Vector::Zero(1);
  for (Index n : v.sample_sizes) {
    Rng rng(derive_seed(v.seed, static_cast<std::uint64_t>(n)));
    const EmpiricalBoundReport r = verify_lemma1(kernel, model, theta0, n, v.trials, rng);
    ok = ok && r.pass;
    out << (r.pass ? "[PASS]" : "[FAIL]") << " empirical_bound n=" << n << " trials=" << r.trials
        << " mean=" << format_double(r.empirical_mean) << " stderr=" << format_double(r.std_error)
        << " bound=" << format_double(r.bound) << '\n';
  }
  ContaminatedGaussianSpec spec{Vector::Constant(1, 2.0), Vector::Constant(1, 20.0), 0.2, 1.0};
  const ContaminationReport c = verify_contamination_argmins(spec, GaussianKernel(1.0));
  ok = ok && c.mmd_pass && c.kl_pass;
  out << (c.mmd_pass ? "[PASS]" : "[FAIL]") << " mmd_argmin value=" << format_double(c.mmd_argmin[0])
      << " target=2 error=" << format_double(c.mmd_error) << '\n';
  out << (c.kl_pass ? "[PASS]" : "[FAIL]") << " kl_argmin value=" << format_double(c.kl_argmin[0])
      << " target=" << format_double(c.kl_expected[0]) << " error=" << format_double(c.kl_error) << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust estimation with MMD-Bayes posteriors and their variational approximation"};
  app.require_subcommand(1);
  CommonArgs args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "flat JSON config file");
    sub->add_option("--set", args.sets, "override one config key, key=value");
  };
  CLI::App* estimate = app.add_subcommand("estimate", "fit the variational MMD posterior to one dataset");
  CLI::App* sweep = app.add_subcommand("sweep", "contamination sweep: RMSE per epsilon and estimator");
  CLI::App* theory = app.add_subcommand("theory", "prior-mass and temperature calculators");
  CLI::App* verify = app.add_subcommand("verify", "empirical-measure bound and contamination argmin checks");
  for (CLI::App* sub : {estimate, sweep, theory, verify}) add_common(sub);
  for (CLI::App* sub : {estimate, sweep, verify}) sub->add_option("--seed", args.seed, "RNG seed");
  for (CLI::App* sub : {estimate, sweep, theory})
    sub->add_option("--out", args.out_dir, "output directory");
  estimate->add_option("--data", args.data_path, "CSV of observations");
  sweep->add_option("--jobs", args.jobs, "worker threads (default: all cores)");
  sweep->add_flag("--svg", args.svg, "also write sweep.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    if (*estimate) return cmd_estimate(args, out);
    if (*sweep) return cmd_sweep(args, out);
    if (*theory) return cmd_theory(args, out);
    return cmd_verify(args, out);
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMalformedCsv;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  }
}

}  // namespace mmdbayes::cli
