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

#include "privpack/reference.h"

#include <algorithm>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "privpack/status_macros.h"

namespace privpack {
namespace {

// A partial allocation over agents 0..i-1, stored as a back pointer into the
// previous level.
struct PartialState {
  std::vector<double> consumption;
  double value = 0.0;
  int parent = -1;
  // -1 for "no bundle".
  int choice = -1;
};

}  // namespace

absl::StatusOr<OracleResult> BruteForceOpt(const PackingInstance& instance) {
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  const int n = instance.num_agents();
  const int m = instance.num_resources;
  const double limit = instance.supply + kFeasibilityTolerance;
  auto fits = [&](const std::vector<double>& consumption) {
    for (int j = 0; j < m; ++j) {
      const double cap = instance.supply_per_resource.empty()
                             ? limit
                             : instance.supply_per_resource[j] +
                                   kFeasibilityTolerance;
      if (consumption[j] > cap) return false;
    }
    return true;
  };

  // Instances with at most kBruteForceProductLimit choice sequences are always
  // solved; larger ones run until the state cap trips.
  double sequences = 1.0;
  for (const AgentData& agent : instance.agents) {
    sequences *= agent.num_bundles() + 1.0;
  }
  const bool capped = sequences > static_cast<double>(kBruteForceProductLimit);

  OracleResult result;
  result.method = "brute";
  std::vector<std::vector<PartialState>> levels(n + 1);
  levels[0].push_back(PartialState{std::vector<double>(m, 0.0), 0.0, -1, -1});

  for (int i = 0; i < n; ++i) {
    const AgentData& agent = instance.agents[i];
    const std::vector<PartialState>& parents = levels[i];
    absl::flat_hash_map<std::vector<double>, size_t> index;
    std::vector<PartialState> children;
    for (size_t parent = 0; parent < parents.size(); ++parent) {
      for (int choice = -1; choice < agent.num_bundles(); ++choice) {
        ++result.enumerated;
        PartialState child;
        child.consumption = parents[parent].consumption;
        child.value = parents[parent].value;
        child.parent = static_cast<int>(parent);
        child.choice = choice;
        if (choice >= 0) {
          for (int j = 0; j < m; ++j) {
            child.consumption[j] += agent.demands[choice][j];
          }
          if (!fits(child.consumption)) continue;
          child.value += agent.values[choice];
        }
        auto [it, inserted] = index.try_emplace(child.consumption,
                                                children.size());
        if (inserted) {
          children.push_back(std::move(child));
          if (capped &&
              static_cast<int64_t>(children.size()) > kBruteForceStateLimit) {
            return absl::ResourceExhaustedError(absl::StrCat(
                "brute force exceeded ", kBruteForceStateLimit,
                " partial allocations at agent ", i));
          }
        } else if (child.value > children[it->second].value) {
          // Generators arrive in lexicographic order, so equal values keep
          // the earlier (smaller) choice sequence.
          children[it->second] = std::move(child);
        }
      }
    }
    // Parents are already in lexicographic order of their choice sequences,
    // so (parent, choice) orders the children the same way.
    std::sort(children.begin(), children.end(),
              [](const PartialState& a, const PartialState& b) {
                return a.parent != b.parent ? a.parent < b.parent
                                            : a.choice < b.choice;
              });
    levels[i + 1] = std::move(children);
  }

  const std::vector<PartialState>& last = levels[n];
  size_t best = 0;
  for (size_t s = 1; s < last.size(); ++s) {
    if (last[s].value > last[best].value) best = s;
  }
  result.opt_value = last[best].value;
  result.allocation = Allocation::Zero(instance);
  int state = static_cast<int>(best);
  for (int i = n; i > 0; --i) {
    const PartialState& node = levels[i][state];
    if (node.choice >= 0) result.allocation.x[i - 1][node.choice] = 1.0;
    state = node.parent;
  }
  return result;
}

absl::StatusOr<DmwResult> NoiselessDualMwu(const PackingInstance& instance,
                                           double alpha, int64_t rounds) {
  DmwOptions options;
  options.noiseless = true;
  options.rounds_override = rounds;
  PRIVPACK_ASSIGN_OR_RETURN(
      DmwResult result,
      RunPriDmw(instance, PrivacySpec{}, alpha, /*seed=*/0, options));
  result.report.solver = "noiseless";
  return result;
}

absl::StatusOr<Allocation> TrivialAllocate(const PackingInstance& instance) {
  PRIVPACK_RETURN_IF_ERROR(CheckInstance(instance));
  if (instance.num_agents() > instance.supply) {
    return absl::FailedPreconditionError(absl::StrCat(
        "trivial allocation needs n <= b (n=", instance.num_agents(),
        ", b=", instance.supply, ")"));
  }
  Allocation alloc = Allocation::Zero(instance);
  for (int i = 0; i < instance.num_agents(); ++i) {
    const auto& values = instance.agents[i].values;
    const auto best = std::max_element(values.begin(), values.end());
    alloc.x[i][best - values.begin()] = 1.0;
  }
  return alloc;
}

}  // namespace privpack
