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

// Data model for packing problems with bundle menus.
//
// Each agent i chooses at most one unit of mass across its bundles
// k = 1..l_i. Bundle k is worth values[k] in [0,1] and consumes
// demands[k][j] in [0,1] of resource j. Every resource has the same supply b.

#ifndef PRIVPACK_MODEL_H_
#define PRIVPACK_MODEL_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privpack {

// Absolute slack allowed before a supply constraint counts as violated.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct AgentData {
  std::vector<double> values;
  // One row per bundle, each row has one entry per resource.
  std::vector<std::vector<double>> demands;

  int num_bundles() const { return static_cast<int>(values.size()); }

  friend bool operator==(const AgentData&, const AgentData&) = default;
};

struct PackingInstance {
  int num_resources = 0;
  // Uniform per-resource supply.
  double supply = 0.0;
  // Optional per-resource supply. Empty means uniform. Solvers accept a
  // non-empty vector only when every entry equals `supply`.
  std::vector<double> supply_per_resource;
  std::vector<AgentData> agents;

  int num_agents() const { return static_cast<int>(agents.size()); }

  friend bool operator==(const PackingInstance&,
                         const PackingInstance&) = default;
};

// Fractional assignment x[i][k] in [0,1] with sum_k x[i][k] <= 1.
struct Allocation {
  std::vector<std::vector<double>> x;

  static Allocation Zero(const PackingInstance& instance);

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct AllocationMetrics {
  double objective = 0.0;
  std::vector<double> consumption;
  // max_j (consumption_j - b), floored at 0.
  double max_violation = 0.0;
  bool feasible = true;
};

// Returns every range or shape violation found; empty means valid.
std::vector<std::string> ValidateInstance(const PackingInstance& instance);

// Returns OK if the instance is valid, otherwise InvalidArgument listing
// every violation.
absl::Status CheckInstance(const PackingInstance& instance);

// Solvers analyse the uniform-supply case only.
absl::Status RequireUniformSupply(const PackingInstance& instance);

// Checks shape and per-agent mass constraints of `alloc` against `instance`.
absl::Status CheckAllocationShape(const PackingInstance& instance,
                                  const Allocation& alloc);

absl::StatusOr<AllocationMetrics> EvaluateAllocation(
    const PackingInstance& instance, const Allocation& alloc);

// JSON instance files:
//   { "n": int, "m": int, "supply": number,
//     "agents": [ { "values": [..], "demands": [[..], ..] }, .. ] }
// An optional "supply_per_resource" array is carried through unchanged.
absl::StatusOr<PackingInstance> ParseInstanceJson(const std::string& text);
std::string InstanceToJson(const PackingInstance& instance);

absl::StatusOr<PackingInstance> LoadInstance(const std::string& path);
absl::Status SaveInstance(const PackingInstance& instance,
                          const std::string& path);

// Copy of `instance` with every supply scaled to `supply`.
PackingInstance WithSupply(const PackingInstance& instance, double supply);

}  // namespace privpack

#endif  // PRIVPACK_MODEL_H_
