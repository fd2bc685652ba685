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

#include "privpack/model.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "file_util.h"
#include "json.hpp"
#include "privpack/summation.h"

namespace privpack {
namespace {

using nlohmann::json;

bool InUnitInterval(double v) { return v >= 0.0 && v <= 1.0; }

// Mass tolerance when checking sum_k x[i][k] <= 1 on averaged allocations.
constexpr double kMassTolerance = 1e-9;

absl::Status FieldError(const std::string& path, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("instance parse error at '", path, "': ", what));
}

absl::StatusOr<double> ReadNumber(const json& node, const std::string& path) {
  if (!node.is_number()) return FieldError(path, "expected a number");
  return node.get<double>();
}

absl::StatusOr<std::vector<double>> ReadNumberArray(const json& node,
                                                    const std::string& path) {
  if (!node.is_array()) return FieldError(path, "expected an array");
  std::vector<double> out;
  out.reserve(node.size());
  for (size_t i = 0; i < node.size(); ++i) {
    const std::string item_path = absl::StrCat(path, "[", i, "]");
    auto value = ReadNumber(node[i], item_path);
    if (!value.ok()) return value.status();
    out.push_back(*value);
  }
  return out;
}

}  // namespace

Allocation Allocation::Zero(const PackingInstance& instance) {
  Allocation alloc;
  alloc.x.reserve(instance.agents.size());
  for (const AgentData& agent : instance.agents) {
    alloc.x.emplace_back(agent.values.size(), 0.0);
  }
  return alloc;
}

std::vector<std::string> ValidateInstance(const PackingInstance& instance) {
  std::vector<std::string> violations;
  const int m = instance.num_resources;
  if (instance.agents.empty()) violations.push_back("n must be >= 1");
  if (m < 1) violations.push_back("m must be >= 1");
  if (!(instance.supply >= 0.0) || !std::isfinite(instance.supply)) {
    violations.push_back("supply must be a finite number >= 0");
  }
  if (!instance.supply_per_resource.empty()) {
    if (static_cast<int>(instance.supply_per_resource.size()) != m) {
      violations.push_back("supply_per_resource length != m");
    }
    for (double s : instance.supply_per_resource) {
      if (!(s >= 0.0) || !std::isfinite(s)) {
        violations.push_back("supply_per_resource entry must be >= 0");
        break;
      }
    }
  }
  for (size_t i = 0; i < instance.agents.size(); ++i) {
    const AgentData& agent = instance.agents[i];
    const std::string where = absl::StrCat("agent ", i, ": ");
    if (agent.values.empty()) {
      violations.push_back(where + "needs at least one bundle");
    }
    if (agent.values.size() != agent.demands.size()) {
      violations.push_back(where + "values/demands bundle count mismatch");
    }
    for (size_t k = 0; k < agent.values.size(); ++k) {
      if (!InUnitInterval(agent.values[k])) {
        violations.push_back(
            absl::StrCat(where, "bundle ", k, " value out of [0,1]"));
      }
    }
    for (size_t k = 0; k < agent.demands.size(); ++k) {
      const auto& row = agent.demands[k];
      if (static_cast<int>(row.size()) != m) {
        violations.push_back(
            absl::StrCat(where, "bundle ", k, " row length mismatch (",
                         row.size(), " != m=", m, ")"));
      }
      if (!std::all_of(row.begin(), row.end(), InUnitInterval)) {
        violations.push_back(
            absl::StrCat(where, "bundle ", k, " demand out of [0,1]"));
      }
    }
  }
  return violations;
}

absl::Status CheckInstance(const PackingInstance& instance) {
  const std::vector<std::string> violations = ValidateInstance(instance);
  if (violations.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(
      absl::StrCat("invalid instance: ", absl::StrJoin(violations, "; ")));
}

absl::Status RequireUniformSupply(const PackingInstance& instance) {
  for (double s : instance.supply_per_resource) {
    if (s != instance.supply) {
      return absl::InvalidArgumentError(
          "solvers require a uniform supply; supply_per_resource differs "
          "from supply");
    }
  }
  return absl::OkStatus();
}

absl::Status CheckAllocationShape(const PackingInstance& instance,
                                  const Allocation& alloc) {
  if (alloc.x.size() != instance.agents.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("allocation has ", alloc.x.size(), " agents, instance has ",
                     instance.agents.size()));
  }
  for (size_t i = 0; i < alloc.x.size(); ++i) {
    if (alloc.x[i].size() != instance.agents[i].values.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("allocation for agent ", i, " has ", alloc.x[i].size(),
                       " bundles, expected ",
                       instance.agents[i].values.size()));
    }
    CompensatedSum mass;
    for (double v : alloc.x[i]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("allocation for agent ", i, " outside [0,1]"));
      }
      mass.Add(v);
    }
    if (mass.Value() > 1.0 + kMassTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("allocation for agent ", i, " has mass ", mass.Value(),
                       " > 1"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<AllocationMetrics> EvaluateAllocation(
    const PackingInstance& instance, const Allocation& alloc) {
  if (absl::Status s = CheckAllocationShape(instance, alloc); !s.ok()) {
    return s;
  }
  const int m = instance.num_resources;
  CompensatedSum objective;
  std::vector<CompensatedSum> consumption(m);
  for (size_t i = 0; i < alloc.x.size(); ++i) {
    const AgentData& agent = instance.agents[i];
    for (size_t k = 0; k < alloc.x[i].size(); ++k) {
      const double x = alloc.x[i][k];
      if (x == 0.0) continue;
      objective.Add(agent.values[k] * x);
      const auto& row = agent.demands[k];
      for (int j = 0; j < m; ++j) consumption[j].Add(row[j] * x);
    }
  }
  AllocationMetrics metrics;
  metrics.objective = objective.Value();
  metrics.consumption.resize(m);
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    metrics.consumption[j] = consumption[j].Value();
    const double supply = instance.supply_per_resource.empty()
                              ? instance.supply
                              : instance.supply_per_resource[j];
    worst = std::max(worst, metrics.consumption[j] - supply);
  }
  metrics.max_violation = worst;
  metrics.feasible = worst <= kFeasibilityTolerance;
  return metrics;
}

absl::StatusOr<PackingInstance> ParseInstanceJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("instance parse error at byte ", e.byte, ": ", e.what()));
  }
  if (!doc.is_object()) return FieldError("$", "expected an object");
  for (const char* field : {"n", "m", "supply", "agents"}) {
    if (!doc.contains(field)) {
      return FieldError(field, absl::StrCat("missing field \"", field, "\""));
    }
  }
  if (!doc["n"].is_number_integer()) return FieldError("n", "expected integer");
  if (!doc["m"].is_number_integer()) return FieldError("m", "expected integer");

  PackingInstance instance;
  const long long n = doc["n"].get<long long>();
  instance.num_resources = doc["m"].get<int>();
  auto supply = ReadNumber(doc["supply"], "supply");
  if (!supply.ok()) return supply.status();
  instance.supply = *supply;
  if (doc.contains("supply_per_resource")) {
    auto per = ReadNumberArray(doc["supply_per_resource"], "supply_per_resource");
    if (!per.ok()) return per.status();
    instance.supply_per_resource = *std::move(per);
  }

  const json& agents = doc["agents"];
  if (!agents.is_array()) return FieldError("agents", "expected an array");
  if (static_cast<long long>(agents.size()) != n) {
    return FieldError("n", absl::StrCat("n=", n, " but agents has ",
                                        agents.size(), " entries"));
  }
  instance.agents.reserve(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string path = absl::StrCat("agents[", i, "]");
    const json& node = agents[i];
    if (!node.is_object()) return FieldError(path, "expected an object");
    for (const char* field : {"values", "demands"}) {
      if (!node.contains(field)) {
        return FieldError(path + "." + field,
                          absl::StrCat("missing field \"", field, "\""));
      }
    }
    AgentData agent;
    auto values = ReadNumberArray(node["values"], path + ".values");
    if (!values.ok()) return values.status();
    agent.values = *std::move(values);
    const json& demands = node["demands"];
    if (!demands.is_array()) {
      return FieldError(path + ".demands", "expected an array of rows");
    }
    for (size_t k = 0; k < demands.size(); ++k) {
      auto row = ReadNumberArray(demands[k],
                                 absl::StrCat(path, ".demands[", k, "]"));
      if (!row.ok()) return row.status();
      agent.demands.push_back(*std::move(row));
    }
    instance.agents.push_back(std::move(agent));
  }
  return instance;
}

std::string InstanceToJson(const PackingInstance& instance) {
  json doc;
  doc["n"] = instance.num_agents();
  doc["m"] = instance.num_resources;
  doc["supply"] = instance.supply;
  if (!instance.supply_per_resource.empty()) {
    doc["supply_per_resource"] = instance.supply_per_resource;
  }
  json agents = json::array();
  for (const AgentData& agent : instance.agents) {
    agents.push_back({{"values", agent.values}, {"demands", agent.demands}});
  }
  doc["agents"] = std::move(agents);
  return doc.dump() + "\n";
}

absl::StatusOr<PackingInstance> LoadInstance(const std::string& path) {
  auto text = internal::ReadFile(path);
  if (!text.ok()) return text.status();
  auto instance = ParseInstanceJson(*text);
  if (!instance.ok()) return instance.status();
  if (absl::Status s = CheckInstance(*instance); !s.ok()) return s;
  return instance;
}

absl::Status SaveInstance(const PackingInstance& instance,
                          const std::string& path) {
  return internal::WriteFile(path, InstanceToJson(instance));
}

PackingInstance WithSupply(const PackingInstance& instance, double supply) {
  PackingInstance copy = instance;
  copy.supply = supply;
  for (double& s : copy.supply_per_resource) s = supply;
  return copy;
}

}  // namespace privpack
