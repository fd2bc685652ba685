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

#include "privpack/dual_core.h"

#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privpack/summation.h"

namespace privpack {
namespace {

absl::Status CheckPriceDimension(const PackingInstance& instance,
                                 const DualPriceVector& p) {
  if (p.num_resources() != instance.num_resources) {
    return absl::InvalidArgumentError(
        absl::StrCat("price vector has ", p.num_resources(),
                     " real coordinates, instance has m=",
                     instance.num_resources));
  }
  return absl::OkStatus();
}

}  // namespace

DualPriceVector DualPriceVector::Uniform(int num_resources, double p_max) {
  return DualPriceVector(
      std::vector<double>(num_resources + 1, p_max / (num_resources + 1)),
      p_max);
}

absl::StatusOr<DualPriceVector> DualPriceVector::Create(
    std::vector<double> prices, double p_max) {
  if (prices.size() < 2) {
    return absl::InvalidArgumentError(
        "price vector needs m >= 1 real coordinates plus the dummy");
  }
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    return absl::InvalidArgumentError("p_max must be positive and finite");
  }
  CompensatedSum total;
  for (double v : prices) {
    if (!(v >= 0.0)) {
      return absl::InvalidArgumentError("price vector has a negative entry");
    }
    total.Add(v);
  }
  if (std::fabs(total.Value() - p_max) > kSimplexTolerance * p_max) {
    return absl::InvalidArgumentError(
        absl::StrCat("price vector l1 norm ", total.Value(), " != p_max ",
                     p_max));
  }
  return DualPriceVector(std::move(prices), p_max);
}

double DualPriceVector::L1Norm() const { return SumCompensated(prices_); }

double BundleSurplus(const AgentData& agent, int bundle,
                     std::span<const double> prices) {
  const auto& row = agent.demands[bundle];
  double cost = 0.0;
  for (size_t j = 0; j < row.size(); ++j) cost += row[j] * prices[j];
  return agent.values[bundle] - cost;
}

BestResponse BestResponseUnchecked(const AgentData& agent,
                                   std::span<const double> prices) {
  BestResponse best;
  double best_surplus = 0.0;
  for (int k = 0; k < agent.num_bundles(); ++k) {
    const double surplus = BundleSurplus(agent, k, prices);
    // Surplus exactly 0 is taken; later bundles need a strict improvement.
    if (surplus >= 0.0 && (!best.bundle || surplus > best_surplus)) {
      best.bundle = k;
      best_surplus = surplus;
    }
  }
  if (best.bundle) best.utility = best_surplus;
  return best;
}

absl::StatusOr<BestResponse> ComputeBestResponse(const AgentData& agent,
                                                 const DualPriceVector& p) {
  for (const auto& row : agent.demands) {
    if (static_cast<int>(row.size()) != p.num_resources()) {
      return absl::InvalidArgumentError(
          absl::StrCat("demand row has ", row.size(),
                       " entries but price vector has m=", p.num_resources()));
    }
  }
  if (agent.values.size() != agent.demands.size()) {
    return absl::InvalidArgumentError("values/demands bundle count mismatch");
  }
  return BestResponseUnchecked(agent, p.all());
}

Allocation BestResponseAllocation(const PackingInstance& instance,
                                  const DualPriceVector& p) {
  Allocation alloc = Allocation::Zero(instance);
  for (size_t i = 0; i < instance.agents.size(); ++i) {
    const BestResponse br = BestResponseUnchecked(instance.agents[i], p.all());
    if (br.bundle) alloc.x[i][*br.bundle] = 1.0;
  }
  return alloc;
}

absl::StatusOr<double> Lagrangian(const PackingInstance& instance,
                                  const Allocation& alloc,
                                  const DualPriceVector& p) {
  if (absl::Status s = CheckPriceDimension(instance, p); !s.ok()) return s;
  if (absl::Status s = CheckAllocationShape(instance, alloc); !s.ok()) {
    return s;
  }
  CompensatedSum total;
  for (double price : p.real()) total.Add(instance.supply * price);
  for (size_t i = 0; i < alloc.x.size(); ++i) {
    const AgentData& agent = instance.agents[i];
    for (size_t k = 0; k < alloc.x[i].size(); ++k) {
      const double x = alloc.x[i][k];
      if (x == 0.0) continue;
      total.Add(x * BundleSurplus(agent, static_cast<int>(k), p.all()));
    }
  }
  return total.Value();
}

double AgentLagrangian(const AgentData& agent, std::span<const double> x,
                       const DualPriceVector& p, double supply,
                       int num_agents) {
  const int m = p.num_resources();
  CompensatedSum total;
  for (int j = 0; j < m; ++j) {
    CompensatedSum used;
    for (size_t k = 0; k < x.size(); ++k) used.Add(agent.demands[k][j] * x[k]);
    total.Add(-p[j] * (used.Value() - supply / num_agents));
  }
  for (size_t k = 0; k < x.size(); ++k) total.Add(agent.values[k] * x[k]);
  return total.Value();
}

absl::StatusOr<std::vector<double>> ExactSubgradient(
    const PackingInstance& instance, const DualPriceVector& p) {
  if (absl::Status s = CheckPriceDimension(instance, p); !s.ok()) return s;
  const int m = instance.num_resources;
  std::vector<CompensatedSum> consumption(m);
  for (const AgentData& agent : instance.agents) {
    const BestResponse br = BestResponseUnchecked(agent, p.all());
    if (!br.bundle) continue;
    const auto& row = agent.demands[*br.bundle];
    for (int j = 0; j < m; ++j) consumption[j].Add(row[j]);
  }
  std::vector<double> gradient(m);
  for (int j = 0; j < m; ++j) {
    gradient[j] = instance.supply - consumption[j].Value();
  }
  return gradient;
}

absl::StatusOr<double> DualObjective(const PackingInstance& instance,
                                     const DualPriceVector& p) {
  if (absl::Status s = CheckPriceDimension(instance, p); !s.ok()) return s;
  CompensatedSum total;
  for (double price : p.real()) total.Add(instance.supply * price);
  for (const AgentData& agent : instance.agents) {
    total.Add(BestResponseUnchecked(agent, p.all()).utility);
  }
  return total.Value();
}

}  // namespace privpack
