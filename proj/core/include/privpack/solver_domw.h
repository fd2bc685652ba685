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

// Private single-pass dual solver with posted prices.
//
// Agents are visited once in uniformly random order (or in arrival order when
// used online). Agent t best-responds to the current prices, receives that
// bundle, and pays <p^(t), y_t> for its demand vector y_t. The noisy demand
// z_t = y_t + Laplace(sigma) drives the price update
//
//   p_j <- p_j (1 + eta clamp(z_tj - b/n, +-grad_max))     j = 1..m
//
// followed by renormalisation to l1 norm p_max. Since each agent receives its
// best response at the posted prices, reporting truthfully is optimal.
//
// Parameters: sigma = m/eps (delta = 0) or sqrt(8 m ln(1/delta))/eps,
// eta = 1/(sqrt(n) sigma), p_max = alpha n / sigma, grad_max = 1 + sigma ln n.

#ifndef PRIVPACK_SOLVER_DOMW_H_
#define PRIVPACK_SOLVER_DOMW_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privpack/dual_core.h"
#include "privpack/model.h"
#include "privpack/privacy.h"
#include "privpack/report.h"

namespace privpack {

// Treatment of the dummy coordinate in the price update.
enum class DummyRule {
  // Dummy weight is carried over with multiplier 1 and renormalised.
  kCarry,
  // Dummy weight is reset to the constant 1 before renormalising.
  kResetToOne,
};

struct DomwOptions {
  // Zero noise; sigma still sets eta, p_max and grad_max.
  bool noiseless = false;
  // Run even when eta * grad_max >= 1.
  bool force = false;
  DummyRule dummy_rule = DummyRule::kCarry;
  // Visiting order for the batch solver; must be a permutation of 0..n-1.
  std::optional<std::vector<int>> permutation;
};

struct DomwParams {
  int num_agents = 0;
  double alpha = 0.0;
  double supply = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
  double p_max = 0.0;
  double grad_max = 0.0;
  double noise_scale = 0.0;
  double guard_product = 0.0;
  // sqrt(n) sigma ln(n) / alpha: the supply scale at which the accuracy
  // bounds become meaningful, with the log factor pinned to ln n.
  double supply_requirement = 0.0;
  bool pure = false;
};

absl::StatusOr<DomwParams> DeriveDomwParams(int num_agents, int num_resources,
                                            double supply,
                                            const PrivacySpec& spec,
                                            double alpha,
                                            const DomwOptions& options = {});

absl::StatusOr<DomwParams> DeriveDomwParams(const PackingInstance& instance,
                                            const PrivacySpec& spec,
                                            double alpha,
                                            const DomwOptions& options = {});

// <p_{1..m}, demand>; `demand` has m entries.
double ComputePayment(const DualPriceVector& p, std::span<const double> demand);

// Uniform permutation of 0..n-1 (Fisher-Yates on the permutation stream).
std::vector<int> SamplePermutation(int n, uint64_t seed);

struct RoundOutcome {
  int round = 0;
  // Index of the agent served (arrival index in online mode).
  int agent = 0;
  std::optional<int> bundle;
  // Value minus payment of the chosen bundle; 0 when empty.
  double surplus = 0.0;
  double payment = 0.0;
  std::vector<double> demand;
  std::vector<double> noisy_demand;
  // Prices posted to this agent, m + 1 entries.
  std::vector<double> prices;
};

// Online allocator: decides for each arriving agent before seeing the next.
// One instance serves one arrival stream; it is not safe for concurrent use.
class OnlineDomwAllocator {
 public:
  static absl::StatusOr<OnlineDomwAllocator> Create(
      int num_agents, int num_resources, double supply,
      const PrivacySpec& spec, double alpha, uint64_t seed,
      const DomwOptions& options = {});

  // Serves the next arrival. Fails once num_agents decisions have been made,
  // on shape errors, or when a multiplier turns non-positive.
  absl::StatusOr<RoundOutcome> NextDecision(const AgentData& agent);

  // OK iff exactly num_agents decisions were made.
  absl::Status Finish() const;

  const DualPriceVector& prices() const { return prices_; }
  const DomwParams& params() const { return params_; }
  int decisions_made() const { return round_; }
  int64_t best_response_evaluations() const { return best_responses_; }
  int64_t clamp_events() const { return clamp_events_; }
  // n < b: every agent gets its top-value bundle free of charge.
  bool trivial() const { return trivial_; }

 private:
  OnlineDomwAllocator(DomwParams params, int num_resources, double supply,
                      uint64_t seed, const DomwOptions& options, bool trivial);

  DomwParams params_;
  int num_resources_;
  double supply_;
  DummyRule dummy_rule_;
  bool trivial_;
  NoiseStream noise_;
  DualPriceVector prices_;
  int round_ = 0;
  int64_t best_responses_ = 0;
  int64_t clamp_events_ = 0;
};

struct DomwResult {
  Allocation allocation;
  // Per agent; 0 for agents without a bundle.
  std::vector<double> payments;
  std::vector<int> permutation;
  std::vector<RoundOutcome> rounds;
  SolverReport report;
  DomwParams params;
};

absl::StatusOr<DomwResult> RunPriDomw(const PackingInstance& instance,
                                      const PrivacySpec& spec, double alpha,
                                      uint64_t seed,
                                      const DomwOptions& options = {});

// Serves `arrivals` in the given order, which the caller asserts is a uniformly
// random arrival order. Fails if the stream is shorter or longer than
// `declared_n`.
absl::StatusOr<std::vector<RoundOutcome>> RunPriDomwOnline(
    std::span<const AgentData> arrivals, int declared_n, int num_resources,
    double supply, const PrivacySpec& spec, double alpha, uint64_t seed,
    const DomwOptions& options = {});

}  // namespace privpack

#endif  // PRIVPACK_SOLVER_DOMW_H_
