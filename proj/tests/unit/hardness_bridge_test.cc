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
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privpack/reference.h"
#include "testing/test_util.h"

namespace privpack {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

constexpr char kWorkload[] = R"({
  "records": [
    {"age": 34, "state": "CA"},
    {"age": 19, "state": "NY"},
    {"age": 52, "state": "CA"},
    {"age": 27, "state": "TX"}
  ],
  "queries": [
    {"field": "age", "op": ">=", "value": 30},
    {"field": "state", "op": "==", "value": "CA"}
  ]
})";

TEST(WorkloadTest, ParsesAndEvaluates) {
  ASSERT_OK_AND_ASSIGN(QueryWorkload workload, ParseWorkloadJson(kWorkload));
  ASSERT_EQ(workload.records.size(), 4u);
  ASSERT_EQ(workload.queries.size(), 2u);
  const QueryMatrix answers = EvaluateWorkload(workload);
  EXPECT_THAT(answers[0], ElementsAre(1.0, 1.0));
  EXPECT_THAT(answers[1], ElementsAre(0.0, 0.0));
  EXPECT_THAT(ExactCounts(answers), ElementsAre(2.0, 2.0));
}

TEST(WorkloadTest, PredicateOperators) {
  const Record record = {{"x", 3.0}, {"s", std::string("a")}};
  EXPECT_EQ(EvaluatePredicate({"x", PredicateOp::kEq, 3.0}, record), 1.0);
  EXPECT_EQ(EvaluatePredicate({"x", PredicateOp::kNe, 3.0}, record), 0.0);
  EXPECT_EQ(EvaluatePredicate({"x", PredicateOp::kLt, 4.0}, record), 1.0);
  EXPECT_EQ(EvaluatePredicate({"x", PredicateOp::kLe, 3.0}, record), 1.0);
  EXPECT_EQ(EvaluatePredicate({"x", PredicateOp::kGt, 3.0}, record), 0.0);
  EXPECT_EQ(EvaluatePredicate({"x", PredicateOp::kGe, 3.0}, record), 1.0);
  EXPECT_EQ(EvaluatePredicate({"s", PredicateOp::kEq, std::string("a")},
                              record),
            1.0);
  EXPECT_EQ(EvaluatePredicate({"s", PredicateOp::kLt, 1.0}, record), 0.0);
  EXPECT_EQ(EvaluatePredicate({"missing", PredicateOp::kEq, 1.0}, record),
            0.0);
}

TEST(WorkloadTest, RejectsUnknownOperator) {
  EXPECT_FALSE(ParseWorkloadJson(
                   R"({"records": [], "queries": [{"field": "a", "op": "~", "value": 1}]})")
                   .ok());
  EXPECT_FALSE(ParseWorkloadJson("[1, 2]").ok());
}

TEST(LexicographicSubsetsTest, OrderAndCount) {
  EXPECT_THAT(LexicographicSubsets(2, 1),
              ElementsAre(ElementsAre(1, 0), ElementsAre(0, 1)));
  EXPECT_EQ(LexicographicSubsets(4, 2).size(), 6u);
  EXPECT_THAT(LexicographicSubsets(4, 2).front(), ElementsAre(1, 1, 0, 0));
  EXPECT_THAT(LexicographicSubsets(4, 2).back(), ElementsAre(0, 0, 1, 1));
}

TEST(BuildReductionTest, SmallConstructionByHand) {
  const QueryMatrix answers = {{1.0, 0.0}, {0.0, 1.0}};
  ASSERT_OK_AND_ASSIGN(ReductionInstance reduction,
                       BuildReductionInstance(answers, 4.0));
  const PackingInstance& packing = reduction.packing;
  EXPECT_EQ(packing.num_agents(), 10);
  EXPECT_EQ(reduction.a_end - reduction.a_begin, 2);
  EXPECT_EQ(reduction.b_end - reduction.b_begin, 8);
  EXPECT_THAT(ValidateInstance(packing), IsEmpty());
  const AgentData& first = packing.agents[reduction.a_begin];
  EXPECT_THAT(first.values, ElementsAre(1.0));
  EXPECT_THAT(first.demands, ElementsAre(ElementsAre(1.0, 0.0)));
  for (int i = reduction.b_begin; i < reduction.b_end; ++i) {
    const AgentData& agent = packing.agents[i];
    EXPECT_THAT(agent.values, ElementsAre(0.25, 0.25));
    EXPECT_THAT(agent.demands,
                ElementsAre(ElementsAre(1.0, 0.0), ElementsAre(0.0, 1.0)));
  }
}

TEST(BuildReductionTest, PerUnitValueOrdering) {
  const QueryMatrix answers = {{1.0, 1.0, 0.0, 1.0},
                               {0.0, 1.0, 1.0, 0.0},
                               {1.0, 0.0, 0.0, 0.0}};
  ASSERT_OK_AND_ASSIGN(ReductionInstance reduction,
                       BuildReductionInstance(answers, 6.0));
  const int m = 4;
  for (int i = reduction.a_begin; i < reduction.a_end; ++i) {
    const AgentData& agent = reduction.packing.agents[i];
    double units = 0.0;
    for (double a : agent.demands[0]) units += a;
    EXPECT_GE(agent.values[0], units / m);
  }
  for (int i = reduction.b_begin; i < reduction.b_end; ++i) {
    const AgentData& agent = reduction.packing.agents[i];
    for (int k = 0; k < agent.num_bundles(); ++k) {
      double units = 0.0;
      for (double a : agent.demands[k]) units += a;
      EXPECT_DOUBLE_EQ(agent.values[k] / units, 1.0 / (2 * m));
    }
  }
}

TEST(BuildReductionTest, Guards) {
  EXPECT_FALSE(BuildReductionInstance({{1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}}, 4.0)
                   .ok());
  EXPECT_FALSE(BuildReductionInstance({{1.0, 0.0}}, 4.0).ok());
  EXPECT_FALSE(BuildReductionInstance({{1.0, 0.0}, {0.0, 1.0}}, 5.0).ok());
  EXPECT_FALSE(BuildReductionInstance({{1.5, 0.0}, {0.0, 1.0}}, 4.0).ok());
  const QueryMatrix wide(1, std::vector<double>(14, 0.0));
  EXPECT_FALSE(BuildReductionInstance(wide, 2.0).ok());
}

TEST(OptLowerBoundTest, ClosedForms) {
  ASSERT_OK_AND_ASSIGN(double bound,
                       OptLowerBound({{1.0, 1.0}, {0.0, 1.0}}, 4.0));
  EXPECT_DOUBLE_EQ(bound, 2.75);
  ASSERT_OK_AND_ASSIGN(double zeros,
                       OptLowerBound({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, 6.0));
  EXPECT_DOUBLE_EQ(zeros, 3 + 6.0 / 2 - 0.5);
}

TEST(OptLowerBoundTest, NeverExceedsBruteForce) {
  SeededRng rng(5, StreamId::kAuditFirst);
  for (double b : {2.0, 4.0, 6.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      QueryMatrix answers(static_cast<int>(b / 2), std::vector<double>(2));
      for (auto& row : answers) {
        for (double& v : row) v = static_cast<double>(rng.UniformInt(2));
      }
      ASSERT_OK_AND_ASSIGN(ReductionInstance reduction,
                           BuildReductionInstance(answers, b));
      ASSERT_OK_AND_ASSIGN(double bound, OptLowerBound(answers, b));
      ASSERT_OK_AND_ASSIGN(OracleResult oracle,
                           BruteForceOpt(reduction.packing));
      EXPECT_GE(oracle.opt_value + 1e-12, bound) << "b=" << b;
    }
  }
}

TEST(ReleaseQueriesTest, SubtractsSubsetAgentUse) {
  const QueryMatrix answers = {{1.0, 0.0}, {0.0, 1.0}};
  ASSERT_OK_AND_ASSIGN(ReductionInstance reduction,
                       BuildReductionInstance(answers, 4.0));
  Allocation alloc = Allocation::Zero(reduction.packing);
  ASSERT_OK_AND_ASSIGN(std::vector<double> empty,
                       ReleaseQueries(reduction, alloc));
  EXPECT_THAT(empty, ElementsAre(4.0, 4.0));
  for (int i = 0; i < 3; ++i) alloc.x[reduction.b_begin + i][0] = 1.0;
  // A-agent use does not enter the release.
  alloc.x[reduction.a_begin][0] = 1.0;
  ASSERT_OK_AND_ASSIGN(std::vector<double> released,
                       ReleaseQueries(reduction, alloc));
  EXPECT_THAT(released, ElementsAre(1.0, 4.0));
}

TEST(ReleaseAccuracyTest, AverageAbsoluteError) {
  const QueryMatrix answers = {{1.0, 0.0}, {1.0, 1.0}};
  ASSERT_OK_AND_ASSIGN(double exact,
                       EvaluateReleaseAccuracy(answers, {2.0, 1.0}));
  EXPECT_EQ(exact, 0.0);
  ASSERT_OK_AND_ASSIGN(double shifted,
                       EvaluateReleaseAccuracy(answers, {3.0, 2.0}));
  EXPECT_DOUBLE_EQ(shifted, 1.0);
  EXPECT_FALSE(EvaluateReleaseAccuracy(answers, {1.0}).ok());
}

TEST(ReleasePipelineTest, NoiselessSolverOnSmallWorkload) {
  const QueryMatrix answers = {
      {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}};
  ASSERT_OK_AND_ASSIGN(ReductionInstance reduction,
                       BuildReductionInstance(answers, 8.0));
  ASSERT_OK_AND_ASSIGN(DmwResult solved,
                       NoiselessDualMwu(reduction.packing, 0.05, 4000));
  ASSERT_OK_AND_ASSIGN(std::vector<double> released,
                       ReleaseQueries(reduction, solved.allocation));
  ASSERT_OK_AND_ASSIGN(double error,
                       EvaluateReleaseAccuracy(answers, released));
  // Target: alpha * b with alpha = 0.25.
  EXPECT_LE(error, 0.25 * 8.0);
  ASSERT_OK_AND_ASSIGN(OracleResult oracle, BruteForceOpt(reduction.packing));
  ASSERT_OK_AND_ASSIGN(std::vector<double> exact_release,
                       ReleaseQueries(reduction, oracle.allocation));
  ASSERT_OK_AND_ASSIGN(double oracle_error,
                       EvaluateReleaseAccuracy(answers, exact_release));
  EXPECT_GE(oracle_error, 0.0);
}

}  // namespace
}  // namespace privpack
