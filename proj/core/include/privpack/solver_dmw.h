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

// Private dual multiplicative-weights solver.
//
// Runs T rounds of multiplicative updates on the dual prices. Each round every
// agent best-responds to the current prices, the per-resource subgradient
// b - consumption_j is perturbed with Laplace(1/eps') noise, truncated to
// [-grad_max, grad_max], and the prices are updated by
//
//   p_j <- p_j (1 - eta g_j) / phi,   phi = sum_j p_j (1 - eta g_j) / p_max
//
// with g = 0 on the dummy coordinate. The output is the time-averaged
// allocation. Only the price sequence depends on the noise; each agent's
// share of the output is a function of its own data and those prices.
//
// Parameters for n agents, m resources, supply b, target (eps, delta) and
// approximation alpha:
//   T = max(1, round(eps^2 n^2 / m))    eta = ln(m+1) / (alpha b T)
//   p_max = 4n / b                      eps' = eps / sqrt(8 T m ln(2/delta))
//   grad_max = n + ln(T) / eps'
// Iteration requires eta * grad_max < 1 so every multiplier stays positive.

#ifndef PRIVPACK_SOLVER_DMW_H_
#define PRIVPACK_SOLVER_DMW_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privpack/dual_core.h"
#include "privpack/model.h"
#include "privpack/privacy.h"
#include "privpack/report.h"

namespace privpack {

struct DmwOptions {
  // Replaces T; eta, eps' and grad_max are re-derived from the new T so the
  // end-to-end privacy budget is unchanged.
  std::optional<int64_t> rounds_override;
  // Oracle mode: no noise, and the width drops the noise term
  // (eps' = +inf, grad_max = n).
  bool noiseless = false;
  // Run even when eta * grad_max >= 1.
  bool force = false;
  bool record_trace = false;
};

struct DmwParams {
  int64_t rounds = 1;
  // eps^2 n^2 / m before rounding.
  double formula_rounds = 0.0;
  bool rounds_overridden = false;
  double alpha = 0.0;
  double supply = 0.0;
  double eta = 0.0;
  double p_max = 0.0;
  double eps_step = 0.0;
  double grad_max = 0.0;
  double noise_scale = 0.0;
  double guard_product = 0.0;
  // Supply above which the analysis guarantees eta * grad_max < 1:
  // 20 ln(T) sqrt(m ln(m+1) ln(6/beta) ln(2/delta)) / (alpha eps).
  double supply_requirement = 0.0;
};

struct DmwRound {
  int64_t round = 0;
  double phi = 0.0;
  // p^(t), m + 1 entries, before the update.
  std::vector<double> prices;
  std::vector<double> grad_exact;
  std::vector<double> grad_noisy;
  std::vector<double> grad_truncated;
};

struct DmwTrace {
  std::vector<DmwRound> rounds;
};

// Columns: round, phi, price_0..price_m, then optionally grad_raw_j (noisy,
// before truncation) and grad_trunc_j for j < m.
std::string TraceToCsv(const DmwTrace& trace, bool include_gradients);

struct DmwResult {
  Allocation allocation;
  SolverReport report;
  DmwParams params;
  std::optional<DmwTrace> trace;
  // Time-averaged price vector (m + 1 entries).
  std::vector<double> average_prices;
  // min_t D(p^(t)), an upper bound on the fractional optimum.
  double dual_bound = 0.0;
  // (1/T) sum_t D(p^(t)) - min_p L(x_bar, p) over the price simplex.
  // Nonnegative, and bounded by the price player's average regret.
  double duality_gap_proxy = 0.0;
};

absl::StatusOr<DmwParams> DeriveDmwParams(const PackingInstance& instance,
                                          const PrivacySpec& spec,
                                          double alpha,
                                          const DmwOptions& options = {});

// Clamp to [-grad_max, grad_max].
double TruncateGradient(double g, double grad_max);

struct MwuStepResult {
  DualPriceVector prices;
  double phi = 0.0;
};

// One normalised multiplicative step. `g_bar` has m + 1 entries with a zero
// dummy component; every multiplier 1 - eta g_j must be positive.
absl::StatusOr<MwuStepResult> MwuStep(const DualPriceVector& p,
                                      std::span<const double> g_bar,
                                      double eta);

// Instances with n < b are solved by TrivialAllocate and reported with
// method "trivial".
absl::StatusOr<DmwResult> RunPriDmw(const PackingInstance& instance,
                                    const PrivacySpec& spec, double alpha,
                                    uint64_t seed,
                                    const DmwOptions& options = {});

// Runs on supply (1 - margin) b and judges the output against b. The margin
// defaults to alpha; margin 0 reproduces RunPriDmw.
absl::StatusOr<DmwResult> RunPriDmwExactFeasible(
    const PackingInstance& instance, const PrivacySpec& spec, double alpha,
    uint64_t seed, const DmwOptions& options = {},
    std::optional<double> margin = std::nullopt);

}  // namespace privpack

#endif  // PRIVPACK_SOLVER_DMW_H_
