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

#include "privpack/hardness_bridge.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "file_util.h"
#include "json.hpp"
#include "privpack/status_macros.h"
#include "privpack/summation.h"

namespace privpack {
namespace {

using nlohmann::json;

absl::StatusOr<PredicateOp> ParseOp(const std::string& op) {
  if (op == "==" || op == "eq") return PredicateOp::kEq;
  if (op == "!=" || op == "ne") return PredicateOp::kNe;
  if (op == "<" || op == "lt") return PredicateOp::kLt;
  if (op == "<=" || op == "le") return PredicateOp::kLe;
  if (op == ">" || op == "gt") return PredicateOp::kGt;
  if (op == ">=" || op == "ge") return PredicateOp::kGe;
  return absl::InvalidArgumentError(absl::StrCat("unknown predicate op: ", op));
}

absl::StatusOr<FieldValue> ParseScalar(const json& node,
                                       const std::string& path) {
  if (node.is_number()) return FieldValue(node.get<double>());
  if (node.is_string()) return FieldValue(node.get<std::string>());
  if (node.is_boolean()) return FieldValue(node.get<bool>() ? 1.0 : 0.0);
  return absl::InvalidArgumentError(
      absl::StrCat("workload parse error at '", path,
                   "': expected a number, string or boolean"));
}

// The supply must be an even integer so that b/2 and 2b are counts.
absl::Status CheckReductionSupply(double supply) {
  if (!(supply >= 2.0) || supply != std::floor(supply) ||
      std::fmod(supply, 2.0) != 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("reduction supply must be an even integer >= 2, got ",
                     supply));
  }
  return absl::OkStatus();
}

absl::Status CheckAnswers(const QueryMatrix& answers, double supply) {
  PRIVPACK_RETURN_IF_ERROR(CheckReductionSupply(supply));
  const size_t records = static_cast<size_t>(supply / 2);
  if (answers.size() != records) {
    return absl::InvalidArgumentError(
        absl::StrCat("reduction needs exactly b/2 = ", records,
                     " records, got ", answers.size()));
  }
  const size_t m = answers.front().size();
  if (m < 2 || m % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("reduction needs an even number of queries, got ", m));
  }
  if (m > kMaxReductionResources) {
    return absl::InvalidArgumentError(
        absl::StrCat("reduction enumerates C(m, m/2) bundles; m=", m,
                     " exceeds the limit ", kMaxReductionResources));
  }
  for (size_t i = 0; i < answers.size(); ++i) {
    if (answers[i].size() != m) {
      return absl::InvalidArgumentError(
          absl::StrCat("record ", i, " has ", answers[i].size(),
                       " query answers, expected ", m));
    }
    for (double v : answers[i]) {
      if (!(v >= 0.0 && v <= 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("record ", i, " has a query answer outside [0,1]"));
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<QueryWorkload> ParseWorkloadJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("workload parse error at byte ", e.byte, ": ", e.what()));
  }
  if (!doc.is_object() || !doc.contains("records") ||
      !doc.contains("queries")) {
    return absl::InvalidArgumentError(
        "workload must be an object with \"records\" and \"queries\"");
  }
  if (!doc["records"].is_array() || !doc["queries"].is_array()) {
    return absl::InvalidArgumentError(
        "workload \"records\" and \"queries\" must be arrays");
  }
  QueryWorkload workload;
  for (size_t i = 0; i < doc["records"].size(); ++i) {
    const json& node = doc["records"][i];
    const std::string path = absl::StrCat("records[", i, "]");
    if (!node.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("workload parse error at '", path,
                       "': expected an object"));
    }
    Record record;
    for (const auto& [key, value] : node.items()) {
      PRIVPACK_ASSIGN_OR_RETURN(record[key],
                                ParseScalar(value, path + "." + key));
    }
    workload.records.push_back(std::move(record));
  }
  for (size_t j = 0; j < doc["queries"].size(); ++j) {
    const json& node = doc["queries"][j];
    const std::string path = absl::StrCat("queries[", j, "]");
    if (!node.is_object() || !node.contains("field") || !node.contains("op") ||
        !node.contains("value") || !node["field"].is_string() ||
        !node["op"].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("workload parse error at '", path,
                       "': expected {\"field\", \"op\", \"value\"}"));
    }
    Predicate predicate;
    predicate.field = node["field"].get<std::string>();
    PRIVPACK_ASSIGN_OR_RETURN(predicate.op,
                              ParseOp(node["op"].get<std::string>()));
    PRIVPACK_ASSIGN_OR_RETURN(predicate.value,
                              ParseScalar(node["value"], path + ".value"));
    const bool ordering = predicate.op != PredicateOp::kEq &&
                          predicate.op != PredicateOp::kNe;
    if (ordering && !std::holds_alternative<double>(predicate.value)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "workload parse error at '", path,
          "': threshold predicates need a numeric value"));
    }
    workload.queries.push_back(std::move(predicate));
  }
  return workload;
}

absl::StatusOr<QueryWorkload> LoadWorkload(const std::string& path) {
  PRIVPACK_ASSIGN_OR_RETURN(std::string text, internal::ReadFile(path));
  return ParseWorkloadJson(text);
}

double EvaluatePredicate(const Predicate& predicate, const Record& record) {
  const auto it = record.find(predicate.field);
  if (it == record.end()) return 0.0;
  const FieldValue& field = it->second;
  if (field.index() != predicate.value.index()) return 0.0;
  if (const auto* s = std::get_if<std::string>(&field)) {
    const std::string& target = std::get<std::string>(predicate.value);
    switch (predicate.op) {
      case PredicateOp::kEq:
        return *s == target ? 1.0 : 0.0;
      case PredicateOp::kNe:
        return *s != target ? 1.0 : 0.0;
      default:
        return 0.0;
    }
  }
  const double v = std::get<double>(field);
  const double t = std::get<double>(predicate.value);
  bool hit = false;
  switch (predicate.op) {
    case PredicateOp::kEq: hit = v == t; break;
    case PredicateOp::kNe: hit = v != t; break;
    case PredicateOp::kLt: hit = v < t; break;
    case PredicateOp::kLe: hit = v <= t; break;
    case PredicateOp::kGt: hit = v > t; break;
    case PredicateOp::kGe: hit = v >= t; break;
  }
  return hit ? 1.0 : 0.0;
}

QueryMatrix EvaluateWorkload(const QueryWorkload& workload) {
  QueryMatrix answers;
  answers.reserve(workload.records.size());
  for (const Record& record : workload.records) {
    std::vector<double> row;
    row.reserve(workload.queries.size());
    for (const Predicate& q : workload.queries) {
      row.push_back(EvaluatePredicate(q, record));
    }
    answers.push_back(std::move(row));
  }
  return answers;
}

std::vector<double> ExactCounts(const QueryMatrix& answers) {
  if (answers.empty()) return {};
  const size_t m = answers.front().size();
  std::vector<CompensatedSum> sums(m);
  for (const auto& row : answers) {
    for (size_t j = 0; j < m && j < row.size(); ++j) sums[j].Add(row[j]);
  }
  std::vector<double> counts(m);
  for (size_t j = 0; j < m; ++j) counts[j] = sums[j].Value();
  return counts;
}

std::vector<std::vector<int>> LexicographicSubsets(int m, int k) {
  std::vector<std::vector<int>> masks;
  if (k < 0 || k > m) return masks;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    std::vector<int> mask(m, 0);
    for (int i : idx) mask[i] = 1;
    masks.push_back(std::move(mask));
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == m - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return masks;
}

absl::StatusOr<ReductionInstance> BuildReductionInstance(
    const QueryMatrix& answers, double supply) {
  PRIVPACK_RETURN_IF_ERROR(CheckReductionSupply(supply));
  if (answers.empty()) {
    return absl::InvalidArgumentError("reduction needs at least one record");
  }
  PRIVPACK_RETURN_IF_ERROR(CheckAnswers(answers, supply));
  const int m = static_cast<int>(answers.front().size());
  const int record_agents = static_cast<int>(answers.size());
  const int subset_agents = static_cast<int>(2 * supply);

  ReductionInstance reduction;
  PackingInstance& packing = reduction.packing;
  packing.num_resources = m;
  packing.supply = supply;
  packing.agents.reserve(record_agents + subset_agents);
  for (const auto& row : answers) {
    packing.agents.push_back(AgentData{{1.0}, {row}});
  }
  AgentData subset_agent;
  for (const auto& mask : LexicographicSubsets(m, m / 2)) {
    subset_agent.values.push_back(0.25);
    subset_agent.demands.emplace_back(mask.begin(), mask.end());
  }
  for (int i = 0; i < subset_agents; ++i) packing.agents.push_back(subset_agent);

  reduction.a_begin = 0;
  reduction.a_end = record_agents;
  reduction.b_begin = record_agents;
  reduction.b_end = record_agents + subset_agents;
  return reduction;
}

absl::StatusOr<double> OptLowerBound(const QueryMatrix& answers,
                                     double supply) {
  if (answers.empty()) {
    return absl::InvalidArgumentError("reduction needs at least one record");
  }
  PRIVPACK_RETURN_IF_ERROR(CheckAnswers(answers, supply));
  const std::vector<double> counts = ExactCounts(answers);
  const double m = static_cast<double>(counts.size());
  CompensatedSum slack;
  for (double c : counts) slack.Add(supply - c);
  return static_cast<double>(answers.size()) + slack.Value() / (2.0 * m) - 0.5;
}

absl::StatusOr<std::vector<double>> ReleaseQueries(
    const ReductionInstance& reduction, const Allocation& alloc) {
  PRIVPACK_RETURN_IF_ERROR(CheckAllocationShape(reduction.packing, alloc));
  const int m = reduction.packing.num_resources;
  std::vector<CompensatedSum> used(m);
  for (int i = reduction.b_begin; i < reduction.b_end; ++i) {
    const AgentData& agent = reduction.packing.agents[i];
    for (size_t k = 0; k < alloc.x[i].size(); ++k) {
      const double x = alloc.x[i][k];
      if (x == 0.0) continue;
      for (int j = 0; j < m; ++j) used[j].Add(agent.demands[k][j] * x);
    }
  }
  std::vector<double> released(m);
  for (int j = 0; j < m; ++j) {
    released[j] = reduction.packing.supply - used[j].Value();
  }
  return released;
}

absl::StatusOr<double> EvaluateReleaseAccuracy(
    const QueryMatrix& answers, const std::vector<double>& released) {
  const std::vector<double> counts = ExactCounts(answers);
  if (counts.size() != released.size() || counts.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("released ", released.size(), " answers for ",
                     counts.size(), " queries"));
  }
  CompensatedSum error;
  for (size_t j = 0; j < counts.size(); ++j) {
    error.Add(std::fabs(released[j] - counts[j]));
  }
  return error.Value() / static_cast<double>(counts.size());
}

}  // namespace privpack
