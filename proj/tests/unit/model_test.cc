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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/test_util.h"

namespace privpack {
namespace {

using ::privpack::testing::RandomInstance;
using ::privpack::testing::SingleAgent;
using ::privpack::testing::TempPath;
using ::testing::Contains;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

TEST(ValidateInstanceTest, ValueAboveOneIsReported) {
  PackingInstance instance = SingleAgent(1.2, 0.5, 1.0);
  EXPECT_THAT(ValidateInstance(instance),
              Contains(HasSubstr("value out of [0,1]")));
}

TEST(ValidateInstanceTest, SingleAgentSingleResourceIsValid) {
  EXPECT_THAT(ValidateInstance(SingleAgent(0.7, 0.5, 1.0)), IsEmpty());
  EXPECT_OK(CheckInstance(SingleAgent(0.7, 0.5, 1.0)));
}

TEST(ValidateInstanceTest, RowLengthMismatchIsReported) {
  PackingInstance instance;
  instance.num_resources = 2;
  instance.supply = 1.0;
  instance.agents.push_back({{0.5}, {{0.1}}});
  EXPECT_THAT(ValidateInstance(instance),
              Contains(HasSubstr("row length mismatch")));
}

TEST(ValidateInstanceTest, DemandOutOfRangeAndNegativeSupply) {
  PackingInstance instance = SingleAgent(0.5, 1.5, -1.0);
  const std::vector<std::string> violations = ValidateInstance(instance);
  EXPECT_GE(violations.size(), 2u);
  EXPECT_FALSE(CheckInstance(instance).ok());
}

TEST(ValidateInstanceTest, NoAgentsIsInvalid) {
  PackingInstance instance;
  instance.num_resources = 1;
  instance.supply = 1.0;
  EXPECT_THAT(ValidateInstance(instance), Contains(HasSubstr("n must be")));
}

TEST(RequireUniformSupplyTest, RejectsNonUniformVector) {
  PackingInstance instance = SingleAgent(0.5, 0.5, 1.0);
  instance.supply_per_resource = {1.0};
  EXPECT_OK(RequireUniformSupply(instance));
  instance.supply_per_resource = {2.0};
  EXPECT_FALSE(RequireUniformSupply(instance).ok());
}

TEST(EvaluateAllocationTest, ZeroAllocation) {
  const PackingInstance instance = RandomInstance(5, 3, 2, 2.0, 11);
  ASSERT_OK_AND_ASSIGN(AllocationMetrics metrics,
                       EvaluateAllocation(instance, Allocation::Zero(instance)));
  EXPECT_EQ(metrics.objective, 0.0);
  EXPECT_THAT(metrics.consumption, ElementsAre(0.0, 0.0, 0.0));
  EXPECT_EQ(metrics.max_violation, 0.0);
  EXPECT_TRUE(metrics.feasible);
}

TEST(EvaluateAllocationTest, SingleBundleByHand) {
  const PackingInstance instance = SingleAgent(0.7, 0.5, 1.0);
  Allocation alloc{{{1.0}}};
  ASSERT_OK_AND_ASSIGN(AllocationMetrics metrics,
                       EvaluateAllocation(instance, alloc));
  EXPECT_DOUBLE_EQ(metrics.objective, 0.7);
  EXPECT_THAT(metrics.consumption, ElementsAre(0.5));
  EXPECT_EQ(metrics.max_violation, 0.0);
  EXPECT_TRUE(metrics.feasible);
}

TEST(EvaluateAllocationTest, ViolationAgainstSmallSupply) {
  const PackingInstance instance = SingleAgent(0.7, 0.5, 0.4);
  Allocation alloc{{{1.0}}};
  ASSERT_OK_AND_ASSIGN(AllocationMetrics metrics,
                       EvaluateAllocation(instance, alloc));
  EXPECT_NEAR(metrics.max_violation, 0.1, 1e-15);
  EXPECT_FALSE(metrics.feasible);
}

TEST(EvaluateAllocationTest, ToleranceAbsorbsRoundingNoise) {
  const PackingInstance instance = SingleAgent(0.7, 0.5, 0.5 - 1e-12);
  Allocation alloc{{{1.0}}};
  ASSERT_OK_AND_ASSIGN(AllocationMetrics metrics,
                       EvaluateAllocation(instance, alloc));
  EXPECT_TRUE(metrics.feasible);
}

TEST(EvaluateAllocationTest, RejectsBadShapes) {
  const PackingInstance instance = SingleAgent(0.7, 0.5, 1.0);
  EXPECT_FALSE(EvaluateAllocation(instance, Allocation{{{0.6, 0.6}}}).ok());
  EXPECT_FALSE(EvaluateAllocation(instance, Allocation{{{1.5}}}).ok());
  EXPECT_FALSE(EvaluateAllocation(instance, Allocation{{{-0.1}}}).ok());
  EXPECT_FALSE(EvaluateAllocation(instance, Allocation{}).ok());
}

TEST(EvaluateAllocationTest, LinearInAllocation) {
  const PackingInstance instance = RandomInstance(12, 3, 3, 4.0, 5);
  SeededRng rng(99, StreamId::kAuditFirst);
  for (int trial = 0; trial < 50; ++trial) {
    Allocation x = Allocation::Zero(instance);
    Allocation y = Allocation::Zero(instance);
    Allocation mid = Allocation::Zero(instance);
    for (int i = 0; i < instance.num_agents(); ++i) {
      const int l = instance.agents[i].num_bundles();
      const int kx = static_cast<int>(rng.UniformInt(l + 1));
      const int ky = static_cast<int>(rng.UniformInt(l + 1));
      if (kx < l) x.x[i][kx] = 1.0;
      if (ky < l) y.x[i][ky] = 1.0;
      for (int k = 0; k < l; ++k) mid.x[i][k] = (x.x[i][k] + y.x[i][k]) / 2;
    }
    ASSERT_OK_AND_ASSIGN(AllocationMetrics mx, EvaluateAllocation(instance, x));
    ASSERT_OK_AND_ASSIGN(AllocationMetrics my, EvaluateAllocation(instance, y));
    ASSERT_OK_AND_ASSIGN(AllocationMetrics mm,
                         EvaluateAllocation(instance, mid));
    const double expected = (mx.objective + my.objective) / 2;
    EXPECT_NEAR(mm.objective, expected, 1e-12 * std::max(1.0, expected));
    for (int j = 0; j < instance.num_resources; ++j) {
      const double c = (mx.consumption[j] + my.consumption[j]) / 2;
      EXPECT_NEAR(mm.consumption[j], c, 1e-12 * std::max(1.0, c));
    }
    EXPECT_LE(mx.objective, instance.num_agents());
  }
}

TEST(InstanceJsonTest, RoundTripIsLossless) {
  const PackingInstance instance = RandomInstance(7, 3, 3, 2.5, 21);
  const std::string path = TempPath("model_roundtrip.json");
  ASSERT_OK(SaveInstance(instance, path));
  ASSERT_OK_AND_ASSIGN(PackingInstance loaded, LoadInstance(path));
  EXPECT_EQ(loaded, instance);
  ASSERT_OK_AND_ASSIGN(PackingInstance reparsed,
                       ParseInstanceJson(InstanceToJson(instance)));
  EXPECT_EQ(reparsed, instance);
}

TEST(InstanceJsonTest, MissingSupplyNamesTheField) {
  const std::string text =
      R"({"n": 1, "m": 1, "agents": [{"values": [0.5], "demands": [[0.5]]}]})";
  absl::StatusOr<PackingInstance> parsed = ParseInstanceJson(text);
  ASSERT_FALSE(parsed.ok());
  EXPECT_THAT(std::string(parsed.status().message()), HasSubstr("supply"));
}

TEST(InstanceJsonTest, ZeroAgentsFailsValidation) {
  const std::string path = TempPath("model_empty.json");
  {
    std::ofstream out(path);
    out << R"({"n": 0, "m": 1, "supply": 1, "agents": []})";
  }
  absl::StatusOr<PackingInstance> loaded = LoadInstance(path);
  ASSERT_FALSE(loaded.ok());
  EXPECT_TRUE(absl::IsInvalidArgument(loaded.status()));
}

TEST(InstanceJsonTest, AgentCountMustMatchN) {
  const std::string text =
      R"({"n": 2, "m": 1, "supply": 1, "agents": [{"values": [0.5], "demands": [[0.5]]}]})";
  EXPECT_FALSE(ParseInstanceJson(text).ok());
}

TEST(InstanceJsonTest, SyntaxErrorIsInvalidArgument) {
  absl::StatusOr<PackingInstance> parsed = ParseInstanceJson("{not json");
  ASSERT_FALSE(parsed.ok());
  EXPECT_TRUE(absl::IsInvalidArgument(parsed.status()));
}

TEST(InstanceJsonTest, MissingFileIsNotFound) {
  absl::StatusOr<PackingInstance> loaded =
      LoadInstance(TempPath("does_not_exist.json"));
  ASSERT_FALSE(loaded.ok());
}

TEST(WithSupplyTest, ReplacesOnlySupply) {
  const PackingInstance instance = RandomInstance(4, 2, 2, 3.0, 2);
  const PackingInstance scaled = WithSupply(instance, 1.5);
  EXPECT_EQ(scaled.supply, 1.5);
  EXPECT_EQ(scaled.agents, instance.agents);
}

}  // namespace
}  // namespace privpack
