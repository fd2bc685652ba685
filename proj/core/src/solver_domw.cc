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

#include "privpack/solver_domw.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privpack/status_macros.h"
#include "privpack/summation.h"

namespace privpack {

absl::StatusOr<DomwParams> DeriveDomwParams(int num_agents, int num_resources,
                                            double supply,
                                            const PrivacySpec& spec,
                                            double alpha,
                                            const DomwOptions& options) {
  PRIVPACK_RETURN_IF_ERROR(ValidatePrivacySpec(spec));
  if (num_agents < 1 || num_resources < 1) {
    return absl::InvalidArgumentError("n and m must be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1)");
  }
  if (!(supply >= 0.0)) return absl::InvalidArgumentError("supply must be >= 0");

  const double n = num_agents;
  DomwParams params;
  params.num_agents = num_agents;
  params.alpha = alpha;
  params.supply = supply;
  params.pure = spec.delta == 0.0;
  params.sigma = SigmaDomw(spec, num_resources);
  params.eta = 1.0 / (std::sqrt(n) * params.sigma);
  params.p_max = alpha * n / params.sigma;
  params.grad_max = 1.0 + params.sigma * std::log(n);
  params.noise_scale = options.noiseless ? 0.0 : params.sigma;
  params.guard_product = params.eta * params.grad_max;
  params.supply_requirement =
      std::sqrt(n) * params.sigma * std::log(n) / alpha;
  if (params.guard_product >= 1.0 && !options.force) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "step-size guard violated: eta * grad_max = %.6g >= 1 (n=%d, "
        "sigma=%.6g)",
        params.guard_product, num_agents, params.sigma));
  }
  return params;
}

absl::StatusOr<DomwParams> DeriveDomwParams(const PackingInstance& instance,
                                            const PrivacySpec& spec,
                                            double alpha,
                                            const DomwOptions& options) {
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  PRIVPACK_RETURN_IF_ERROR(RequireUniformSupply(instance));
  return DeriveDomwParams(instance.num_agents(), instance.num_resources,
                          instance.supply, spec, alpha, options);
}

double ComputePayment(const DualPriceVector& p,
                      std::span<const double> demand) {
  CompensatedSum total;
  for (size_t j = 0; j < demand.size(); ++j) total.Add(p[j] * demand[j]);
  return total.Value();
}

std::vector<int> SamplePermutation(int n, uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  SeededRng rng(seed, StreamId::kPermutation);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  return order;
}

OnlineDomwAllocator::OnlineDomwAllocator(DomwParams params, int num_resources,
                                         double supply, uint64_t seed,
                                         const DomwOptions& options,
                                         bool trivial)
    : params_(params),
      num_resources_(num_resources),
      supply_(supply),
      dummy_rule_(options.dummy_rule),
      trivial_(trivial),
      noise_(params.noise_scale, seed, StreamId::kDemandNoise),
      prices_(DualPriceVector::Uniform(num_resources, params.p_max)) {}

absl::StatusOr<OnlineDomwAllocator> OnlineDomwAllocator::Create(
    int num_agents, int num_resources, double supply, const PrivacySpec& spec,
    double alpha, uint64_t seed, const DomwOptions& options) {
  PRIVPACK_ASSIGN_OR_RETURN(
      DomwParams params, DeriveDomwParams(num_agents, num_resources, supply,
                                          spec, alpha, options));
  const bool trivial = num_agents < supply;
  return OnlineDomwAllocator(params, num_resources, supply, seed, options,
                             trivial);
}

absl::StatusOr<RoundOutcome> OnlineDomwAllocator::NextDecision(
    const AgentData& agent) {
  const int m = num_resources_;
  if (round_ >= params_.num_agents) {
    return absl::OutOfRangeError(absl::StrCat(
        "arrival stream longer than the declared n=", params_.num_agents));
  }
  if (agent.values.empty() || agent.values.size() != agent.demands.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("arrival ", round_, ": malformed bundle menu"));
  }
  for (const auto& row : agent.demands) {
    if (static_cast<int>(row.size()) != m) {
      return absl::InvalidArgumentError(absl::StrCat(
          "arrival ", round_, ": demand row length ", row.size(), " != m"));
    }
  }

  RoundOutcome outcome;
  outcome.round = round_;
  outcome.agent = round_;
  outcome.prices.assign(prices_.all().begin(), prices_.all().end());
  outcome.demand.assign(m, 0.0);

  if (trivial_) {
    const auto best = std::max_element(agent.values.begin(),
                                       agent.values.end());
    outcome.bundle = static_cast<int>(best - agent.values.begin());
    outcome.surplus = *best;
    outcome.demand = agent.demands[*outcome.bundle];
    outcome.noisy_demand = outcome.demand;
    ++round_;
    return outcome;
  }

  const BestResponse br = BestResponseUnchecked(agent, prices_.all());
  ++best_responses_;
  if (br.bundle) {
    outcome.bundle = br.bundle;
    outcome.surplus = br.utility;
    outcome.demand = agent.demands[*br.bundle];
  }
  outcome.payment = ComputePayment(prices_, outcome.demand);

  const double share = supply_ / params_.num_agents;
  outcome.noisy_demand.resize(m);
  std::vector<double> weights(m + 1);
  CompensatedSum total;
  for (int j = 0; j < m; ++j) {
    outcome.noisy_demand[j] = outcome.demand[j] + noise_.Laplace();
    const double raw = outcome.noisy_demand[j] - share;
    const double g = std::clamp(raw, -params_.grad_max, params_.grad_max);
    if (g != raw) ++clamp_events_;
    const double multiplier = 1.0 + params_.eta * g;
    if (!(multiplier > 0.0)) {
      return absl::OutOfRangeError(absl::StrFormat(
          "round %d: non-positive price multiplier %.6g on resource %d",
          round_, multiplier, j));
    }
    weights[j] = prices_[j] * multiplier;
    total.Add(weights[j]);
  }
  weights[m] = dummy_rule_ == DummyRule::kCarry ? prices_.dummy() : 1.0;
  total.Add(weights[m]);
  const double scale = params_.p_max / total.Value();
  for (double& w : weights) w *= scale;
  auto next = DualPriceVector::Create(std::move(weights), params_.p_max);
  if (!next.ok()) {
    return absl::InternalError(
        absl::StrCat("round ", round_, ": ", next.status().message()));
  }
  prices_ = *std::move(next);
  ++round_;
  return outcome;
}

absl::Status OnlineDomwAllocator::Finish() const {
  if (round_ != params_.num_agents) {
    return absl::FailedPreconditionError(
        absl::StrCat("arrival stream ended after ", round_,
                     " agents; declared n=", params_.num_agents));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<RoundOutcome>> RunPriDomwOnline(
    std::span<const AgentData> arrivals, int declared_n, int num_resources,
    double supply, const PrivacySpec& spec, double alpha, uint64_t seed,
    const DomwOptions& options) {
  PRIVPACK_ASSIGN_OR_RETURN(
      OnlineDomwAllocator allocator,
      OnlineDomwAllocator::Create(declared_n, num_resources, supply, spec,
                                  alpha, seed, options));
  std::vector<RoundOutcome> decisions;
  decisions.reserve(arrivals.size());
  for (const AgentData& agent : arrivals) {
    PRIVPACK_ASSIGN_OR_RETURN(RoundOutcome outcome,
                              allocator.NextDecision(agent));
    decisions.push_back(std::move(outcome));
  }
  PRIVPACK_RETURN_IF_ERROR(allocator.Finish());
  return decisions;
}

absl::StatusOr<DomwResult> RunPriDomw(const PackingInstance& instance,
                                      const PrivacySpec& spec, double alpha,
                                      uint64_t seed,
                                      const DomwOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  PRIVPACK_RETURN_IF_ERROR(RequireUniformSupply(instance));
  const int n = instance.num_agents();
  const int m = instance.num_resources;

  std::vector<int> order;
  if (options.permutation) {
    order = *options.permutation;
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(sorted.size()) != n || sorted[i] != i) {
        return absl::InvalidArgumentError(
            "permutation override is not a permutation of the agents");
      }
    }
  } else {
    order = SamplePermutation(n, seed);
  }

  PRIVPACK_ASSIGN_OR_RETURN(
      OnlineDomwAllocator allocator,
      OnlineDomwAllocator::Create(n, m, instance.supply, spec, alpha, seed,
                                  options));
  DomwResult result;
  result.params = allocator.params();
  result.permutation = order;
  result.allocation = Allocation::Zero(instance);
  result.payments.assign(n, 0.0);
  result.rounds.reserve(n);
  CompensatedSum total_payment;
  for (int t = 0; t < n; ++t) {
    const int agent = order[t];
    PRIVPACK_ASSIGN_OR_RETURN(RoundOutcome outcome,
                              allocator.NextDecision(instance.agents[agent]));
    outcome.agent = agent;
    if (outcome.bundle) {
      result.allocation.x[agent][*outcome.bundle] = 1.0;
      result.payments[agent] = outcome.payment;
      total_payment.Add(outcome.payment);
    }
    result.rounds.push_back(std::move(outcome));
  }
  PRIVPACK_RETURN_IF_ERROR(allocator.Finish());

  PRIVPACK_ASSIGN_OR_RETURN(AllocationMetrics metrics,
                            EvaluateAllocation(instance, result.allocation));
  SolverReport& report = result.report;
  report.solver = "domw";
  report.method = allocator.trivial() ? "trivial" : "domw";
  report.seed = seed;
  report.SetMetrics(metrics);
  report.rounds = n;
  report.clamp_events = allocator.clamp_events();
  report.best_response_evaluations = allocator.best_response_evaluations();
  const DomwParams& p = result.params;
  report.AddParameter("epsilon", spec.epsilon);
  report.AddParameter("delta", spec.delta);
  report.AddParameter("alpha", p.alpha);
  report.AddParameter("supply", p.supply);
  report.AddParameter("sigma", p.sigma);
  report.AddParameter("eta", p.eta);
  report.AddParameter("p_max", p.p_max);
  report.AddParameter("grad_max", p.grad_max);
  report.AddParameter("noise_scale", p.noise_scale);
  report.AddParameter("eta_grad_max", p.guard_product);
  report.AddParameter("supply_requirement", p.supply_requirement);
  report.AddParameter("pure", p.pure ? 1.0 : 0.0);
  report.AddParameter("noiseless", options.noiseless ? 1.0 : 0.0);
  report.AddParameter("dummy_reset",
                      options.dummy_rule == DummyRule::kResetToOne ? 1.0 : 0.0);
  report.AddParameter("total_payment", total_payment.Value());
  if (allocator.trivial()) {
    report.warnings.push_back(
        "n < b: every agent receives its highest-value bundle");
  } else if (instance.supply < p.supply_requirement) {
    report.warnings.push_back(absl::StrFormat(
        "supply b=%g is below sqrt(n) sigma ln(n) / alpha = %.6g",
        instance.supply, p.supply_requirement));
  }
  if (p.guard_product >= 1.0) {
    report.warnings.push_back("forced run with eta * grad_max >= 1");
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace privpack
