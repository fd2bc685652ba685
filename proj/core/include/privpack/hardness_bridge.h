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

// Reduction from counting-query release to private packing.
//
// Given b/2 records and m counting queries, build a packing instance with
//   - one "A" agent per record: a single bundle of value 1 whose demand on
//     resource j is q_j(record);
//   - 2b "B" agents, each offering one bundle per size-m/2 subset of the
//     resources (demand 1 on the subset, 0 elsewhere) at value 1/4.
// A-agents earn at least 1/m per unit of resource and B-agents exactly 1/(2m),
// so a near-optimal allocation serves the A-agents and fills the rest with
// B-agents. b minus the B-agents' use of resource j then estimates q_j(D),
// and depends on the records only through the (jointly private) B outputs.

#ifndef PRIVPACK_HARDNESS_BRIDGE_H_
#define PRIVPACK_HARDNESS_BRIDGE_H_

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "privpack/model.h"

namespace privpack {

inline constexpr int kMaxReductionResources = 12;

// Scalar record field: number or string.
using FieldValue = std::variant<double, std::string>;
using Record = std::map<std::string, FieldValue>;

enum class PredicateOp { kEq, kNe, kLt, kLe, kGt, kGe };

// `field op value`. Ordering ops need a numeric field and value; eq/ne
// compare numbers with numbers and strings with strings. A missing field or
// a type mismatch evaluates to 0.
struct Predicate {
  std::string field;
  PredicateOp op = PredicateOp::kEq;
  FieldValue value;
};

struct QueryWorkload {
  std::vector<Record> records;
  std::vector<Predicate> queries;
};

// answers[i][j] = q_j(record i) in [0, 1].
using QueryMatrix = std::vector<std::vector<double>>;

// Workload JSON:
//   { "records": [ { "age": 34, "state": "CA" }, ... ],
//     "queries": [ { "field": "age", "op": ">=", "value": 30 }, ... ] }
// with op one of ==, !=, <, <=, >, >=.
absl::StatusOr<QueryWorkload> ParseWorkloadJson(const std::string& text);
absl::StatusOr<QueryWorkload> LoadWorkload(const std::string& path);

double EvaluatePredicate(const Predicate& predicate, const Record& record);
QueryMatrix EvaluateWorkload(const QueryWorkload& workload);

// q_j(D) = sum_i answers[i][j].
std::vector<double> ExactCounts(const QueryMatrix& answers);

struct ReductionInstance {
  PackingInstance packing;
  // Agents [a_begin, a_end) are the record agents, [b_begin, b_end) the
  // subset agents.
  int a_begin = 0, a_end = 0;
  int b_begin = 0, b_end = 0;
};

// Size-k subsets of {0..m-1} as 0/1 masks in lexicographic order of their
// sorted index lists.
std::vector<std::vector<int>> LexicographicSubsets(int m, int k);

// Requires an even m in [2, 12], answers in [0,1] with m columns, an even
// integer b and exactly b/2 records.
absl::StatusOr<ReductionInstance> BuildReductionInstance(
    const QueryMatrix& answers, double supply);

// n' + (1/2m) sum_j (b - q_j(D)) - 1/2, a lower bound on the optimum.
absl::StatusOr<double> OptLowerBound(const QueryMatrix& answers, double supply);

// b - sum over subset agents of their use of resource j.
absl::StatusOr<std::vector<double>> ReleaseQueries(
    const ReductionInstance& reduction, const Allocation& alloc);

// (1/m) sum_j |released_j - q_j(D)|.
absl::StatusOr<double> EvaluateReleaseAccuracy(
    const QueryMatrix& answers, const std::vector<double>& released);

}  // namespace privpack

#endif  // PRIVPACK_HARDNESS_BRIDGE_H_
