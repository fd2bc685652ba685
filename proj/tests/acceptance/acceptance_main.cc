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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privpack/experiment.h"
#include "privpack/hardness_bridge.h"
#include "privpack/model.h"
#include "privpack/privacy.h"
#include "privpack/reference.h"
#include "privpack/report.h"
#include "privpack/solver_dmw.h"
#include "privpack/solver_domw.h"

namespace privpack {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Verdict Fail(const absl::Status& status) {
  return {false, absl::StrCat("error: ", status.ToString())};
}

// n <= 6, m <= 3, one or two bundles per agent, b in {1, 2, 3}.
PackingInstance TinyInstance(uint64_t seed) {
  SeededRng rng(seed, StreamId::kAuditFirst);
  const int n = 1 + static_cast<int>(rng.UniformInt(6));
  const int m = 1 + static_cast<int>(rng.UniformInt(3));
  const double b = 1.0 + static_cast<double>(rng.UniformInt(3));
  SeededRng draw(seed, StreamId::kInstanceGenerator);
  PackingInstance instance;
  instance.num_resources = m;
  instance.supply = b;
  instance.agents.resize(n);
  for (AgentData& agent : instance.agents) {
    const int bundles = 1 + static_cast<int>(draw.UniformInt(2));
    for (int k = 0; k < bundles; ++k) {
      agent.values.push_back(draw.NextUnit());
      std::vector<double> row(m);
      for (double& a : row) a = draw.NextUnit();
      agent.demands.push_back(std::move(row));
    }
  }
  return instance;
}

constexpr int kTinySuiteSize = 50;

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t k = values.size();
  if (k == 0) return std::numeric_limits<double>::quiet_NaN();
  return k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

Verdict OracleEquivalence() {
  int passed = 0;
  double worst_gap = 0.0;
  double worst_violation = 0.0;
  for (uint64_t seed = 1; seed <= kTinySuiteSize; ++seed) {
    const PackingInstance instance = TinyInstance(seed);
    absl::StatusOr<OracleResult> oracle = BruteForceOpt(instance);
    if (!oracle.ok()) return Fail(oracle.status());
    absl::StatusOr<DmwResult> result = NoiselessDualMwu(instance, 0.05, 5000);
    if (!result.ok()) return Fail(result.status());
    const double n = instance.num_agents();
    const double gap = oracle->opt_value - result->report.objective;
    const double violation = result->report.max_violation;
    worst_gap = std::max(worst_gap, gap / n);
    worst_violation = std::max(worst_violation, violation / instance.supply);
    if (gap <= 0.25 * n && violation <= 0.25 * instance.supply) ++passed;
  }
  return {passed == kTinySuiteSize,
          absl::StrFormat("%d/%d instances within bounds, max gap/n %.4f, "
                          "max violation/b %.4f",
                          passed, kTinySuiteSize, worst_gap, worst_violation)};
}

Verdict WrapperFeasibility() {
  int feasible = 0;
  DmwOptions options;
  options.noiseless = true;
  options.rounds_override = 5000;
  for (uint64_t seed = 1; seed <= kTinySuiteSize; ++seed) {
    const PackingInstance instance = TinyInstance(seed);
    absl::StatusOr<DmwResult> result = RunPriDmwExactFeasible(
        instance, {1.0, 1e-6, 0.05}, 0.25, seed, options);
    if (!result.ok()) return Fail(result.status());
    absl::StatusOr<AllocationMetrics> metrics =
        EvaluateAllocation(instance, result->allocation);
    if (!metrics.ok()) return Fail(metrics.status());
    if (metrics->feasible) ++feasible;
  }
  return {feasible >= 49, absl::StrFormat("%d/%d feasible against b", feasible,
                                          kTinySuiteSize)};
}

Verdict NoisyDmwTrend() {
  constexpr int kAgents = 400;
  constexpr int kResources = 4;
  constexpr int kSeeds = 20;
  constexpr double kAlpha = 0.3;
  constexpr int64_t kRounds = 2000;
  const PrivacySpec spec{5.0, 1e-4, 0.05};
  const std::vector<double> supplies = {50.0, 100.0, 200.0};
  std::vector<double> abs_medians;
  std::vector<double> signed_medians;
  int wrapper_feasible = 0;
  for (double b : supplies) {
    std::vector<double> abs_gaps;
    std::vector<double> gaps;
    for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
      absl::StatusOr<PackingInstance> instance = GenerateInstance(
          InstanceKind::kUniform, kAgents, kResources, 2, b, seed);
      if (!instance.ok()) return Fail(instance.status());
      absl::StatusOr<double> baseline = ComputeReference(
          *instance, ReferenceKind::kNoiseless, kAlpha, kRounds);
      if (!baseline.ok()) return Fail(baseline.status());
      SolveRequest request;
      request.solver = SolverKind::kDmw;
      request.spec = spec;
      request.alpha = kAlpha;
      request.seed = seed;
      request.rounds_override = kRounds;
      absl::StatusOr<SolveOutcome> noisy = RunSolver(*instance, request);
      if (!noisy.ok()) return Fail(noisy.status());
      const double gap = *baseline - noisy->report.objective;
      gaps.push_back(gap);
      abs_gaps.push_back(std::abs(gap));
      if (b == supplies.back()) {
        request.solver = SolverKind::kDmwExact;
        absl::StatusOr<SolveOutcome> wrapped = RunSolver(*instance, request);
        if (!wrapped.ok()) return Fail(wrapped.status());
        if (wrapped->report.feasible) ++wrapper_feasible;
      }
    }
    abs_medians.push_back(Median(abs_gaps));
    signed_medians.push_back(Median(gaps));
  }
  bool monotone = true;
  for (size_t i = 1; i < abs_medians.size(); ++i) {
    monotone &= abs_medians[i] <= abs_medians[i - 1];
  }
  const double rate = static_cast<double>(wrapper_feasible) / kSeeds;
  return {monotone && rate >= 0.9,
          absl::StrFormat("median |gap| %.4f, %.4f, %.4f (signed %.4f, %.4f, "
                          "%.4f) for b = 50, 100, 200; wrapper feasible %.0f%% "
                          "at b = 200",
                          abs_medians[0], abs_medians[1], abs_medians[2],
                          signed_medians[0], signed_medians[1],
                          signed_medians[2], 100.0 * rate)};
}

Verdict LaplaceStatistics() {
  constexpr int kDraws = 1'000'000;
  NoiseStream noise(1.0, 2026, StreamId::kSubgradientNoise);
  double sum = 0.0;
  double sum_sq = 0.0;
  int exceed[3] = {0, 0, 0};
  for (int i = 0; i < kDraws; ++i) {
    const double x = noise.Laplace();
    sum += x;
    sum_sq += x * x;
    for (int t = 1; t <= 3; ++t) {
      if (std::abs(x) > t) ++exceed[t - 1];
    }
  }
  const double mean = sum / kDraws;
  const double variance = sum_sq / kDraws - mean * mean;
  bool pass = std::abs(mean) <= 0.01 && variance >= 1.95 && variance <= 2.05;
  std::string tails;
  for (int t = 1; t <= 3; ++t) {
    const double p = std::exp(-static_cast<double>(t));
    const double freq = static_cast<double>(exceed[t - 1]) / kDraws;
    const double sd = std::sqrt(p * (1.0 - p) / kDraws);
    const double z = (freq - p) / sd;
    pass &= std::abs(z) <= 3.0;
    absl::StrAppendFormat(&tails, " P(|X|>%d) %.5f (z %.2f)", t, freq, z);
  }
  return {pass, absl::StrFormat("mean %.5f, variance %.5f,%s", mean, variance,
                                tails)};
}

Verdict Concentration() {
  ConcentrationConfig config;
  config.num_resources = 4;
  config.rounds = 1000;
  config.beta = 0.05;
  config.trials = 2000;
  config.p_max = 1.0;
  config.eps_step = 1.0;
  config.seed = 2026;
  absl::StatusOr<ConcentrationResult> inner =
      CheckInnerProductConcentration(config);
  if (!inner.ok()) return Fail(inner.status());
  absl::StatusOr<ConcentrationResult> overflow =
      CheckTruncationOverflow(config);
  if (!overflow.ok()) return Fail(overflow.status());
  const bool pass = inner->upper_rate <= 0.05 && inner->lower_rate <= 0.05 &&
                    overflow->upper_rate <= 0.05 &&
                    overflow->lower_rate <= 0.05;
  return {pass,
          absl::StrFormat("inner-product exceedance %.4f/%.4f, overflow "
                          "exceedance %.4f/%.4f over %d trials",
                          inner->upper_rate, inner->lower_rate,
                          overflow->upper_rate, overflow->lower_rate,
                          static_cast<int>(config.trials))};
}

Verdict PrivacyAudit() {
  absl::StatusOr<AuditResult> audit = AuditLaplaceMechanism(1.0, 1'000'000, 7);
  if (!audit.ok()) return Fail(audit.status());
  absl::StatusOr<AuditResult> control = AuditLaplaceMechanism(
      std::numeric_limits<double>::infinity(), 1'000'000, 7);
  if (!control.ok()) return Fail(control.status());
  const bool pass =
      !audit->non_private && audit->estimate <= 1.1 && control->non_private;
  return {pass, absl::StrFormat("estimate %.4f at eps' = 1, scale-0 control "
                                "flagged non-private: %s",
                                audit->estimate,
                                control->non_private ? "yes" : "no")};
}

Verdict DomwContracts() {
  constexpr int kSeeds = 20;
  constexpr int kResources = 4;
  constexpr double kSupply = 50.0;
  constexpr double kAlpha = 0.3;
  const PrivacySpec spec{1.0, 0.0, 0.05};
  int violations_a = 0;
  int violations_b = 0;
  int violations_c = 0;
  auto check = [&](int n, uint64_t seed) -> absl::Status {
    absl::StatusOr<PackingInstance> instance = GenerateInstance(
        InstanceKind::kUniform, n, kResources, 2, kSupply, seed);
    if (!instance.ok()) return instance.status();
    absl::StatusOr<DomwResult> result = RunPriDomw(*instance, spec, kAlpha, seed);
    if (!result.ok()) return result.status();
    if (result->report.best_response_evaluations != n) ++violations_a;
    for (const RoundOutcome& round : result->rounds) {
      if (round.bundle.has_value() && round.surplus < 0.0) ++violations_b;
      double norm = 0.0;
      for (double p : round.prices) norm += p;
      if (std::abs(norm - result->params.p_max) >
          1e-9 * result->params.p_max) {
        ++violations_c;
      }
    }
    return absl::OkStatus();
  };
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    if (absl::Status s = check(500, seed); !s.ok()) return Fail(s);
  }

  // Linear-time contract: best of several timed batches per size.
  std::vector<PackingInstance> small;
  std::vector<PackingInstance> large;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    small.push_back(*GenerateInstance(InstanceKind::kUniform, 500, kResources,
                                      2, kSupply, seed));
    large.push_back(*GenerateInstance(InstanceKind::kUniform, 1000, kResources,
                                      2, kSupply, seed));
  }
  auto time_batch = [&](const std::vector<PackingInstance>& batch) {
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 7; ++rep) {
      const Clock::time_point start = Clock::now();
      for (size_t i = 0; i < batch.size(); ++i) {
        (void)RunPriDomw(batch[i], spec, kAlpha, i + 1);
      }
      best = std::min(best, SecondsSince(start));
    }
    return best;
  };
  const double t_small = time_batch(small);
  const double t_large = time_batch(large);
  const double ratio = t_large / t_small;
  const bool pass = violations_a == 0 && violations_b == 0 &&
                    violations_c == 0 && ratio <= 2.5;
  return {pass,
          absl::StrFormat("%d runs: evaluation-count violations %d, negative "
                          "surplus %d, price-norm violations %d; time ratio "
                          "n=1000/n=500 %.3f",
                          kSeeds, violations_a, violations_b, violations_c,
                          ratio)};
}

Verdict HardnessPipeline() {
  constexpr double kSupply = 8.0;
  const std::string workload_json = R"({
    "records": [
      {"age": 34, "member": "yes"},
      {"age": 19, "member": "no"},
      {"age": 52, "member": "no"},
      {"age": 27, "member": "yes"}
    ],
    "queries": [
      {"field": "age", "op": ">=", "value": 30},
      {"field": "member", "op": "==", "value": "yes"}
    ]
  })";
  absl::StatusOr<QueryWorkload> workload = ParseWorkloadJson(workload_json);
  if (!workload.ok()) return Fail(workload.status());
  std::vector<QueryMatrix> cases = {EvaluateWorkload(*workload)};
  // Every 4 x 2 answer matrix as well.
  for (int mask = 0; mask < 256; ++mask) {
    QueryMatrix answers(4, std::vector<double>(2));
    for (int bit = 0; bit < 8; ++bit) {
      answers[bit / 2][bit % 2] = (mask >> bit) & 1;
    }
    cases.push_back(std::move(answers));
  }
  int bound_ok = 0;
  int error_ok = 0;
  double worst_error = 0.0;
  for (const QueryMatrix& answers : cases) {
    absl::StatusOr<ReductionInstance> reduction =
        BuildReductionInstance(answers, kSupply);
    if (!reduction.ok()) return Fail(reduction.status());
    absl::StatusOr<double> bound = OptLowerBound(answers, kSupply);
    if (!bound.ok()) return Fail(bound.status());
    absl::StatusOr<OracleResult> oracle = BruteForceOpt(reduction->packing);
    if (!oracle.ok()) return Fail(oracle.status());
    if (oracle->opt_value + 1e-9 >= *bound) ++bound_ok;
    absl::StatusOr<DmwResult> solved =
        NoiselessDualMwu(reduction->packing, 0.05, 4000);
    if (!solved.ok()) return Fail(solved.status());
    absl::StatusOr<std::vector<double>> released =
        ReleaseQueries(*reduction, solved->allocation);
    if (!released.ok()) return Fail(released.status());
    absl::StatusOr<double> error = EvaluateReleaseAccuracy(answers, *released);
    if (!error.ok()) return Fail(error.status());
    worst_error = std::max(worst_error, *error);
    if (*error <= 2.0) ++error_ok;
  }
  const int total = static_cast<int>(cases.size());
  return {bound_ok == total && error_ok == total,
          absl::StrFormat("%d/%d optima above the lower bound, %d/%d releases "
                          "with average error <= 2 (worst %.4f)",
                          bound_ok, total, error_ok, total, worst_error)};
}

// Serializes everything a solver returns.
absl::StatusOr<std::string> SolveFingerprint(const PackingInstance& instance,
                                             SolverKind kind) {
  SolveRequest request;
  request.solver = kind;
  const bool online = kind == SolverKind::kDomw || kind == SolverKind::kDomwOnline;
  request.spec = {online ? 1.0 : 50.0, 1e-6, 0.05};
  request.alpha = 0.2;
  request.seed = 0x5eed;
  request.rounds_override = 300;
  request.record_trace = true;
  absl::StatusOr<SolveOutcome> outcome = RunSolver(instance, request);
  if (!outcome.ok()) return outcome.status();
  std::string out = ReportToJson(outcome->report, false);
  absl::StrAppend(&out, AllocationToJson(outcome->allocation));
  for (double p : outcome->payments) absl::StrAppendFormat(&out, ",%.17g", p);
  if (outcome->trace.has_value()) {
    absl::StrAppend(&out, TraceToCsv(*outcome->trace, true));
  }
  return out;
}

Verdict Determinism() {
  absl::StatusOr<PackingInstance> instance =
      GenerateInstance(InstanceKind::kUniform, 14, 2, 2, 5.0, 99);
  if (!instance.ok()) return Fail(instance.status());
  int identical = 0;
  int total = 0;
  for (SolverKind kind :
       {SolverKind::kDmw, SolverKind::kDmwExact, SolverKind::kDomw,
        SolverKind::kDomwOnline, SolverKind::kNoiseless, SolverKind::kBrute}) {
    absl::StatusOr<std::string> first = SolveFingerprint(*instance, kind);
    absl::StatusOr<std::string> second = SolveFingerprint(*instance, kind);
    if (!first.ok()) return Fail(first.status());
    if (!second.ok()) return Fail(second.status());
    ++total;
    if (*first == *second) ++identical;
  }
  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(R"({
    "solver": "dmw", "kind": "uniform", "n": [30, 60], "m": 2,
    "b": [10, 20], "epsilon": 50.0, "delta": 1e-6, "alpha": 0.2,
    "seeds": [1, 2, 3], "rounds_override": 100, "reference": "noiseless",
    "reference_rounds": 200, "threads": 2})");
  if (!config.ok()) return Fail(config.status());
  absl::StatusOr<std::vector<ExperimentRow>> rows_a = RunExperiment(*config);
  absl::StatusOr<std::vector<ExperimentRow>> rows_b = RunExperiment(*config);
  if (!rows_a.ok()) return Fail(rows_a.status());
  if (!rows_b.ok()) return Fail(rows_b.status());
  ++total;
  if (ExperimentRowsToCsv(*rows_a, false) ==
      ExperimentRowsToCsv(*rows_b, false)) {
    ++identical;
  }
  return {identical == total,
          absl::StrFormat("%d/%d outputs byte-identical (6 solvers + sweep)",
                          identical, total)};
}

struct Criterion {
  int id;
  const char* name;
  // Wall-clock budget in seconds.
  double budget;
  std::function<Verdict()> run;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 60, OracleEquivalence},
      {2, "exact-feasibility wrapper", 60, WrapperFeasibility},
      {3, "noisy dmw trend", 600, NoisyDmwTrend},
      {4, "laplace statistics", 10, LaplaceStatistics},
      {5, "noise concentration", 120, Concentration},
      {6, "privacy audit", 30, PrivacyAudit},
      {7, "domw contracts", 120, DomwContracts},
      {8, "hardness pipeline", 30, HardnessPipeline},
      {9, "determinism", 60, Determinism},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const Clock::time_point start = Clock::now();
    const Verdict verdict = criterion.run();
    const double seconds = SecondsSince(start);
    const bool pass = verdict.pass && seconds < criterion.budget;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d (%s): %s [%.1f s of %.0f s]\n",
                pass ? "PASS" : "FAIL", criterion.id, criterion.name,
                verdict.detail.c_str(), seconds, criterion.budget);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace privpack

int main() { return privpack::Main(); }
