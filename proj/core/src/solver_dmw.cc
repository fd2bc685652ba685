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

#include "privpack/solver_dmw.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privpack/reference.h"
#include "privpack/status_macros.h"
#include "privpack/summation.h"

namespace privpack {
namespace {

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void EchoParams(const DmwParams& params, const PrivacySpec& spec,
                bool noiseless, SolverReport& report) {
  report.AddParameter("epsilon", spec.epsilon);
  report.AddParameter("delta", spec.delta);
  report.AddParameter("beta", spec.beta);
  report.AddParameter("alpha", params.alpha);
  report.AddParameter("supply", params.supply);
  report.AddParameter("T", static_cast<double>(params.rounds));
  report.AddParameter("T_formula", params.formula_rounds);
  report.AddParameter("T_overridden", params.rounds_overridden ? 1.0 : 0.0);
  report.AddParameter("eta", params.eta);
  report.AddParameter("p_max", params.p_max);
  report.AddParameter("eps_step", params.eps_step);
  report.AddParameter("grad_max", params.grad_max);
  report.AddParameter("noise_scale", params.noise_scale);
  report.AddParameter("eta_grad_max", params.guard_product);
  report.AddParameter("supply_requirement", params.supply_requirement);
  report.AddParameter("noiseless", noiseless ? 1.0 : 0.0);
}

absl::StatusOr<DmwResult> TrivialResult(const PackingInstance& instance,
                                        uint64_t seed) {
  PRIVPACK_ASSIGN_OR_RETURN(Allocation alloc, TrivialAllocate(instance));
  PRIVPACK_ASSIGN_OR_RETURN(AllocationMetrics metrics,
                            EvaluateAllocation(instance, alloc));
  DmwResult result;
  result.allocation = std::move(alloc);
  result.report.solver = "dmw";
  result.report.method = "trivial";
  result.report.seed = seed;
  result.report.SetMetrics(metrics);
  result.report.AddParameter("supply", instance.supply);
  result.report.warnings.push_back(
      "n < b: every agent receives its highest-value bundle");
  return result;
}

}  // namespace

absl::StatusOr<DmwParams> DeriveDmwParams(const PackingInstance& instance,
                                          const PrivacySpec& spec,
                                          double alpha,
                                          const DmwOptions& options) {
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  PRIVPACK_RETURN_IF_ERROR(RequireUniformSupply(instance));
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1)");
  }
  if (!(instance.supply > 0.0)) {
    return absl::InvalidArgumentError("supply must be > 0");
  }
  if (!options.noiseless) PRIVPACK_RETURN_IF_ERROR(ValidatePrivacySpec(spec));
  if (options.rounds_override && *options.rounds_override < 1) {
    return absl::InvalidArgumentError("rounds override must be >= 1");
  }

  const double n = instance.num_agents();
  const int m = instance.num_resources;
  const double b = instance.supply;

  DmwParams params;
  params.alpha = alpha;
  params.supply = b;
  params.formula_rounds = spec.epsilon * spec.epsilon * n * n / m;
  if (options.rounds_override) {
    params.rounds = *options.rounds_override;
    params.rounds_overridden = true;
  } else {
    if (!options.noiseless && !(params.formula_rounds < 1e15)) {
      return absl::InvalidArgumentError("round count overflows");
    }
    params.rounds =
        std::max<int64_t>(1, std::llround(params.formula_rounds));
  }
  const double rounds = static_cast<double>(params.rounds);
  params.eta = std::log(m + 1.0) / (alpha * b * rounds);
  params.p_max = 4.0 * n / b;
  if (options.noiseless) {
    params.eps_step = std::numeric_limits<double>::infinity();
    params.grad_max = n;
    params.noise_scale = 0.0;
  } else {
    PRIVPACK_ASSIGN_OR_RETURN(params.eps_step,
                              PerStepEpsilonDmw(spec, params.rounds, m));
    params.grad_max = n + std::log(rounds) / params.eps_step;
    params.noise_scale = 1.0 / params.eps_step;
    params.supply_requirement =
        20.0 * std::log(rounds) *
        std::sqrt(m * std::log(m + 1.0) * std::log(6.0 / spec.beta) *
                  std::log(2.0 / spec.delta)) /
        (alpha * spec.epsilon);
  }
  params.guard_product = params.eta * params.grad_max;
  if (params.guard_product >= 1.0 && !options.force) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "step-size guard violated: eta * grad_max = %.6g >= 1 (supply b=%g "
        "is too small for T=%d rounds; the analysis asks for b >= %.6g)",
        params.guard_product, b, params.rounds, params.supply_requirement));
  }
  return params;
}

double TruncateGradient(double g, double grad_max) {
  return std::clamp(g, -grad_max, grad_max);
}

absl::StatusOr<MwuStepResult> MwuStep(const DualPriceVector& p,
                                      std::span<const double> g_bar,
                                      double eta) {
  const size_t dims = p.all().size();
  if (g_bar.size() != dims) {
    return absl::InvalidArgumentError(absl::StrCat(
        "gradient has ", g_bar.size(), " entries, expected ", dims));
  }
  if (g_bar.back() != 0.0) {
    return absl::InvalidArgumentError("dummy gradient component must be 0");
  }
  std::vector<double> weights(dims);
  CompensatedSum total;
  for (size_t j = 0; j < dims; ++j) {
    const double multiplier = 1.0 - eta * g_bar[j];
    if (!(multiplier > 0.0)) {
      return absl::OutOfRangeError(absl::StrFormat(
          "non-positive multiplier 1 - eta*g = %.6g at coordinate %d",
          multiplier, static_cast<int>(j)));
    }
    weights[j] = p[static_cast<int>(j)] * multiplier;
    total.Add(weights[j]);
  }
  const double phi = total.Value() / p.p_max();
  for (double& w : weights) w /= phi;
  PRIVPACK_ASSIGN_OR_RETURN(DualPriceVector next,
                            DualPriceVector::Create(std::move(weights),
                                                    p.p_max()));
  return MwuStepResult{std::move(next), phi};
}

std::string TraceToCsv(const DmwTrace& trace, bool include_gradients) {
  std::ostringstream out;
  out.precision(17);
  const size_t dims =
      trace.rounds.empty() ? 0 : trace.rounds.front().prices.size();
  out << "round,phi";
  for (size_t j = 0; j < dims; ++j) out << ",price_" << j;
  if (include_gradients && dims > 0) {
    for (size_t j = 0; j + 1 < dims; ++j) out << ",grad_raw_" << j;
    for (size_t j = 0; j + 1 < dims; ++j) out << ",grad_trunc_" << j;
  }
  out << "\n";
  for (const DmwRound& r : trace.rounds) {
    out << r.round << "," << r.phi;
    for (double p : r.prices) out << "," << p;
    if (include_gradients) {
      for (double g : r.grad_noisy) out << "," << g;
      for (double g : r.grad_truncated) out << "," << g;
    }
    out << "\n";
  }
  return out.str();
}

absl::StatusOr<DmwResult> RunPriDmw(const PackingInstance& instance,
                                    const PrivacySpec& spec, double alpha,
                                    uint64_t seed, const DmwOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  PRIVPACK_RETURN_IF_ERROR(RequireUniformSupply(instance));
  if (instance.num_agents() < instance.supply) {
    auto trivial = TrivialResult(instance, seed);
    if (trivial.ok()) trivial->report.wall_time_ms = ElapsedMs(start);
    return trivial;
  }
  PRIVPACK_ASSIGN_OR_RETURN(DmwParams params,
                            DeriveDmwParams(instance, spec, alpha, options));

  const int n = instance.num_agents();
  const int m = instance.num_resources;
  const double b = instance.supply;

  DmwResult result;
  result.params = params;
  if (options.record_trace) result.trace.emplace();

  NoiseStream noise(params.noise_scale, seed, StreamId::kSubgradientNoise);
  DualPriceVector prices = DualPriceVector::Uniform(m, params.p_max);

  std::vector<std::vector<int64_t>> counts(n);
  for (int i = 0; i < n; ++i) {
    counts[i].assign(instance.agents[i].values.size(), 0);
  }
  std::vector<CompensatedSum> price_sums(m + 1);
  std::vector<double> g_bar(m + 1, 0.0);
  std::vector<double> exact(m), noisy(m);
  double dual_bound = std::numeric_limits<double>::infinity();
  CompensatedSum dual_sum;
  int64_t clamp_events = 0;

  for (int64_t t = 1; t <= params.rounds; ++t) {
    std::vector<CompensatedSum> consumption(m);
    CompensatedSum dual_value;
    for (double price : prices.real()) dual_value.Add(b * price);
    for (int i = 0; i < n; ++i) {
      const AgentData& agent = instance.agents[i];
      const BestResponse br = BestResponseUnchecked(agent, prices.all());
      if (!br.bundle) continue;
      ++counts[i][*br.bundle];
      dual_value.Add(br.utility);
      const auto& row = agent.demands[*br.bundle];
      for (int j = 0; j < m; ++j) consumption[j].Add(row[j]);
    }
    dual_bound = std::min(dual_bound, dual_value.Value());
    dual_sum.Add(dual_value.Value());

    for (int j = 0; j < m; ++j) {
      exact[j] = b - consumption[j].Value();
      noisy[j] = exact[j] + noise.Laplace();
      g_bar[j] = TruncateGradient(noisy[j], params.grad_max);
      if (g_bar[j] != noisy[j]) ++clamp_events;
    }
    g_bar[m] = 0.0;
    for (int j = 0; j <= m; ++j) price_sums[j].Add(prices[j]);

    auto step = MwuStep(prices, g_bar, params.eta);
    if (!step.ok()) {
      return absl::Status(step.status().code(),
                          absl::StrCat("round ", t, ": ",
                                       step.status().message()));
    }
    if (result.trace) {
      DmwRound row;
      row.round = t;
      row.phi = step->phi;
      row.prices.assign(prices.all().begin(), prices.all().end());
      row.grad_exact = exact;
      row.grad_noisy = noisy;
      row.grad_truncated.assign(g_bar.begin(), g_bar.begin() + m);
      result.trace->rounds.push_back(std::move(row));
    }
    prices = std::move(step->prices);
  }

  const double rounds = static_cast<double>(params.rounds);
  result.allocation = Allocation::Zero(instance);
  for (int i = 0; i < n; ++i) {
    for (size_t k = 0; k < counts[i].size(); ++k) {
      result.allocation.x[i][k] = static_cast<double>(counts[i][k]) / rounds;
    }
  }
  result.average_prices.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    result.average_prices[j] = price_sums[j].Value() / rounds;
  }
  PRIVPACK_ASSIGN_OR_RETURN(AllocationMetrics metrics,
                            EvaluateAllocation(instance, result.allocation));
  // min over the simplex of L(x_bar, p): all of p_max on the most violated
  // resource, or on the dummy when x_bar is feasible.
  double min_slack = 0.0;
  for (int j = 0; j < m; ++j) {
    min_slack = std::min(min_slack, b - metrics.consumption[j]);
  }
  const double worst_lagrangian = metrics.objective + params.p_max * min_slack;
  result.dual_bound = dual_bound;
  result.duality_gap_proxy = dual_sum.Value() / rounds - worst_lagrangian;

  SolverReport& report = result.report;
  report.solver = "dmw";
  report.method = options.noiseless ? "noiseless" : "dmw";
  report.seed = seed;
  report.SetMetrics(metrics);
  report.rounds = params.rounds;
  report.clamp_events = clamp_events;
  report.best_response_evaluations = static_cast<int64_t>(n) * params.rounds;
  EchoParams(params, spec, options.noiseless, report);
  report.AddParameter("dual_bound", result.dual_bound);
  report.AddParameter("duality_gap_proxy", result.duality_gap_proxy);
  if (params.rounds_overridden) {
    report.warnings.push_back(absl::StrFormat(
        "T overridden: %d rounds instead of %.6g", params.rounds,
        params.formula_rounds));
  }
  if (!options.noiseless && b < params.supply_requirement) {
    report.warnings.push_back(absl::StrFormat(
        "supply b=%g is below %.6g, the level at which the accuracy "
        "guarantees apply",
        b, params.supply_requirement));
  }
  if (params.guard_product >= 1.0) {
    report.warnings.push_back("forced run with eta * grad_max >= 1");
  }
  report.wall_time_ms = ElapsedMs(start);
  return result;
}

absl::StatusOr<DmwResult> RunPriDmwExactFeasible(
    const PackingInstance& instance, const PrivacySpec& spec, double alpha,
    uint64_t seed, const DmwOptions& options, std::optional<double> margin) {
  const auto start = std::chrono::steady_clock::now();
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  const double shrink = margin.value_or(alpha);
  if (!(shrink >= 0.0 && shrink < 1.0)) {
    return absl::InvalidArgumentError("feasibility margin must lie in [0, 1)");
  }
  const double inner_supply = (1.0 - shrink) * instance.supply;
  PRIVPACK_ASSIGN_OR_RETURN(
      DmwResult result,
      RunPriDmw(WithSupply(instance, inner_supply), spec, alpha, seed,
                options));
  PRIVPACK_ASSIGN_OR_RETURN(AllocationMetrics metrics,
                            EvaluateAllocation(instance, result.allocation));
  result.report.SetMetrics(metrics);
  result.report.solver = "dmw-exact";
  result.report.AddParameter("original_supply", instance.supply);
  result.report.AddParameter("inner_supply", inner_supply);
  result.report.AddParameter("feasibility_margin", shrink);
  if (!metrics.feasible) {
    result.report.warnings.push_back(absl::StrFormat(
        "output exceeds the original supply by %.6g", metrics.max_violation));
  }
  result.report.wall_time_ms = ElapsedMs(start);
  return result;
}

}  // namespace privpack
