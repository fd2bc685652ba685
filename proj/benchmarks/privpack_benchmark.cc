// Copyright 2026 The privpack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "privpack/dual_core.h"
#include "privpack/generator.h"
#include "privpack/model.h"
#include "privpack/privacy.h"
#include "privpack/reference.h"
#include "privpack/solver_dmw.h"
#include "privpack/solver_domw.h"

namespace privpack {
namespace {

PackingInstance Uniform(int n, int m, int bundles, double supply) {
  return *GenerateInstance(InstanceKind::kUniform, n, m, bundles, supply, 42);
}

void BM_ExactSubgradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PackingInstance instance = Uniform(n, 4, 3, n / 4.0);
  const DualPriceVector p = DualPriceVector::Uniform(4, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ExactSubgradient(instance, p));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactSubgradient)->RangeMultiplier(4)->Range(64, 16384)
    ->Complexity(benchmark::oN);

void BM_Laplace(benchmark::State& state) {
  NoiseStream noise(1.0, 7, StreamId::kSubgradientNoise);
  for (auto _ : state) benchmark::DoNotOptimize(noise.Laplace());
}
BENCHMARK(BM_Laplace);

void BM_MwuStep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const DualPriceVector p = DualPriceVector::Uniform(m, 10.0);
  std::vector<double> g(m + 1, 0.5);
  g[m] = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(MwuStep(p, g, 0.01));
}
BENCHMARK(BM_MwuStep)->Arg(2)->Arg(16)->Arg(128);

// One batch run; rounds fixed so the cost is n * T best responses.
void BM_PriDmw(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PackingInstance instance = Uniform(n, 4, 2, n / 2.0);
  DmwOptions options;
  options.rounds_override = 200;
  if (!RunPriDmw(instance, {50.0, 1e-6, 0.05}, 0.3, 1, options).ok()) {
    state.SkipWithError("parameters rejected");
    return;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunPriDmw(instance, {50.0, 1e-6, 0.05}, 0.3, 1, options));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_PriDmw)->RangeMultiplier(2)->Range(250, 4000)
    ->Complexity(benchmark::oN)->Unit(benchmark::kMillisecond);

// Single pass; linear in n.
void BM_PriDomw(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PackingInstance instance = Uniform(n, 4, 2, 50.0);
  if (!RunPriDomw(instance, {1.0, 0.0, 0.05}, 0.3, 1).ok()) {
    state.SkipWithError("parameters rejected");
    return;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunPriDomw(instance, {1.0, 0.0, 0.05}, 0.3, 1));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_PriDomw)->RangeMultiplier(2)->Range(500, 16000)
    ->Complexity(benchmark::oN)->Unit(benchmark::kMicrosecond);

void BM_BruteForceOpt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PackingInstance instance = Uniform(n, 2, 2, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceOpt(instance));
}
BENCHMARK(BM_BruteForceOpt)->DenseRange(4, 12, 4)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace privpack

BENCHMARK_MAIN();
