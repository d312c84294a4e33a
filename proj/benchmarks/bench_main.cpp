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
#include "mmdbayes/kernel.hpp"
#include "mmdbayes/mmd.hpp"
#include "mmdbayes/vi.hpp"

#include <benchmark/benchmark.h>

namespace mmdbayes {
namespace {

Samples normal_rows(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  return sample(ModelSpec::gaussian(d, 1.0), Vector::Zero(d), n, rng);
}

void BM_Gram(benchmark::State& state) {
  const Index n = state.range(0);
  const Samples x = normal_rows(n, 2, 1), y = normal_rows(n, 2, 2);
  const GaussianKernel k(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(k.gram(x, y));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Gram)->Arg(256)->Arg(1024);

void BM_VStatistic(benchmark::State& state) {
  const Index n = state.range(0);
  const Samples x = normal_rows(n, 1, 3), y = normal_rows(n, 1, 4);
  const GaussianKernel k(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmd2_vstat(k, x, y).value);
  state.SetItemsProcessed(state.iterations() * 3 * n * n);
}
BENCHMARK(BM_VStatistic)->Arg(200)->Arg(2000);

void BM_UStatistic(benchmark::State& state) {
  const Index n = state.range(0);
  const Samples x = normal_rows(n, 1, 5), y = normal_rows(n, 1, 6);
  const GaussianKernel k(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmd2_ustat(k, x, y).value);
}
BENCHMARK(BM_UStatistic)->Arg(200)->Arg(2000);

// One gradient estimate at the study size n = M = 200.
void BM_GradEstimate(benchmark::State& state) {
  const Index d = state.range(0);
  const Samples data = normal_rows(200, d, 7);
  const MeanFieldGaussian q{Vector::Constant(d, 0.1), Vector::Constant(d, 0.5)};
  const PsgaviConfig cfg;
  const GaussianKernel k = GaussianKernel::for_dimension(d);
  Rng rng(8);
  for (auto _ : state) benchmark::DoNotOptimize(grad_estimate(q, data, ModelSpec::gaussian(d), k, cfg, rng));
}
BENCHMARK(BM_GradEstimate)->Arg(1)->Arg(15);

void BM_GradEstimateUniform(benchmark::State& state) {
  Rng rng(9);
  const ModelSpec u = ModelSpec::uniform(1);
  const Samples data = sample(u, Vector::Constant(1, 1.0), 200, rng);
  PsgaviConfig cfg;
  cfg.estimator = GradEstimator::UniformClosedForm;
  const MeanFieldGaussian q{Vector::Constant(1, 1.0), Vector::Constant(1, 0.2)};
  for (auto _ : state) benchmark::DoNotOptimize(grad_estimate(q, data, u, GaussianKernel(1.0), cfg, rng));
}
BENCHMARK(BM_GradEstimateUniform);

// A full optimizer run per iteration, T = 100 steps.
void BM_Psgavi(benchmark::State& state) {
  const Samples data = normal_rows(200, 1, 10);
  PsgaviConfig cfg;
  cfg.iterations = 100;
  cfg.record_objective = state.range(0) != 0;
  const MeanFieldGaussian init = default_init(data);
  for (auto _ : state)
    benchmark::DoNotOptimize(psgavi(data, ModelSpec::gaussian(1), GaussianKernel(1.0), cfg, init).final.m[0]);
  state.SetItemsProcessed(state.iterations() * cfg.iterations);
}
BENCHMARK(BM_Psgavi)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace mmdbayes

// The packaged benchmark_main archive is LTO bytecode tied to one compiler build.
BENCHMARK_MAIN();
