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

// Lagrangian machinery shared by the dual solvers.
//
// With prices p_1..p_m on the supply constraints the partial Lagrangian is
//
//   L(x, p) = sum_j b p_j + sum_i sum_k x_ik (pi_ik - sum_j a_ijk p_j)
//
// and the dual objective is D(p) = max_x L(x, p). The maximiser decomposes
// per agent into a best response, and b - consumption at the best response is
// a subgradient of D.
//
// Price vectors carry one extra "dummy" coordinate p_{m+1} for the constraint
// <0, x> <= 0. It has no demand and no supply; it only absorbs l1 mass so the
// real prices can shrink while the vector stays on the p_max-simplex.

#ifndef PRIVPACK_DUAL_CORE_H_
#define PRIVPACK_DUAL_CORE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "privpack/model.h"

namespace privpack {

// Relative tolerance for the l1 norm of a price vector.
inline constexpr double kSimplexTolerance = 1e-9;

class DualPriceVector {
 public:
  // p_max / (m + 1) on every coordinate, dummy included.
  static DualPriceVector Uniform(int num_resources, double p_max);

  // `prices` has m + 1 entries, the last being the dummy. Rejects negative
  // entries or an l1 norm off p_max by more than kSimplexTolerance relative.
  static absl::StatusOr<DualPriceVector> Create(std::vector<double> prices,
                                                double p_max);

  int num_resources() const { return static_cast<int>(prices_.size()) - 1; }
  double p_max() const { return p_max_; }

  // All m + 1 coordinates.
  std::span<const double> all() const { return prices_; }
  // The m real coordinates.
  std::span<const double> real() const {
    return std::span<const double>(prices_).first(prices_.size() - 1);
  }
  double operator[](int j) const { return prices_[j]; }
  double dummy() const { return prices_.back(); }

  double L1Norm() const;

 private:
  DualPriceVector(std::vector<double> prices, double p_max)
      : prices_(std::move(prices)), p_max_(p_max) {}

  std::vector<double> prices_;
  double p_max_ = 0.0;
};

struct BestResponse {
  // Bundle index, or nullopt for the empty allocation.
  std::optional<int> bundle;
  // pi_k - <a_k, p> of the chosen bundle, 0 when empty.
  double utility = 0.0;
};

// Surplus pi_k - sum_j a_kj p_j of bundle k. Only the first m prices are read.
double BundleSurplus(const AgentData& agent, int bundle,
                     std::span<const double> prices);

// Bundle maximising the surplus among bundles with surplus >= 0; the smallest
// index wins ties. Empty when every surplus is negative.
absl::StatusOr<BestResponse> ComputeBestResponse(const AgentData& agent,
                                                 const DualPriceVector& p);

// Unchecked variant for solver inner loops; `prices` must hold at least
// agent.demands[k].size() entries.
BestResponse BestResponseUnchecked(const AgentData& agent,
                                   std::span<const double> prices);

// Integral allocation putting each agent on its best response.
Allocation BestResponseAllocation(const PackingInstance& instance,
                                  const DualPriceVector& p);

absl::StatusOr<double> Lagrangian(const PackingInstance& instance,
                                  const Allocation& alloc,
                                  const DualPriceVector& p);

// Per-agent share of the Lagrangian:
//   L_i = sum_k pi_ik x_ik - sum_j p_j (sum_k a_ijk x_ik - b/n).
// Summing over agents gives Lagrangian().
double AgentLagrangian(const AgentData& agent, std::span<const double> x,
                       const DualPriceVector& p, double supply,
                       int num_agents);

// b - consumption_j at the best-response allocation, one entry per real
// resource. Callers append the dummy component 0 themselves.
absl::StatusOr<std::vector<double>> ExactSubgradient(
    const PackingInstance& instance, const DualPriceVector& p);

absl::StatusOr<double> DualObjective(const PackingInstance& instance,
                                     const DualPriceVector& p);

}  // namespace privpack

#endif  // PRIVPACK_DUAL_CORE_H_
