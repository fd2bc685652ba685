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

#ifndef PRIVPACK_TESTS_TESTING_TEST_UTIL_H_
#define PRIVPACK_TESTS_TESTING_TEST_UTIL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gtest/gtest.h"
#include "privpack/model.h"
#include "privpack/privacy.h"

#define PRIVPACK_TEST_CONCAT_INNER(a, b) a##b
#define PRIVPACK_TEST_CONCAT(a, b) PRIVPACK_TEST_CONCAT_INNER(a, b)

#define ASSERT_OK(expr)                                \
  do {                                                 \
    const ::absl::Status _st = ::privpack::testing::AsStatus(expr); \
    ASSERT_TRUE(_st.ok()) << _st;                      \
  } while (0)

#define EXPECT_OK(expr)                                \
  do {                                                 \
    const ::absl::Status _st = ::privpack::testing::AsStatus(expr); \
    EXPECT_TRUE(_st.ok()) << _st;                      \
  } while (0)

#define ASSERT_OK_AND_ASSIGN(lhs, rexpr)                                  \
  ASSERT_OK_AND_ASSIGN_IMPL(PRIVPACK_TEST_CONCAT(_statusor_, __LINE__), \
                            lhs, rexpr)

#define ASSERT_OK_AND_ASSIGN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                              \
  ASSERT_TRUE(statusor.ok()) << statusor.status();      \
  lhs = std::move(statusor).value()

namespace privpack::testing {

inline absl::Status AsStatus(const absl::Status& status) { return status; }
template <typename T>
absl::Status AsStatus(const absl::StatusOr<T>& status_or) {
  return status_or.status();
}

// One agent, one bundle, one resource.
inline PackingInstance SingleAgent(double value, double demand,
                                   double supply) {
  PackingInstance instance;
  instance.num_resources = 1;
  instance.supply = supply;
  instance.agents.push_back({{value}, {{demand}}});
  return instance;
}

// Random instance with n, m, per-agent bundle counts in [1, max_bundles] and
// supply b, drawn from `seed`.
inline PackingInstance RandomInstance(int n, int m, int max_bundles,
                                      double supply, uint64_t seed) {
  SeededRng rng(seed, StreamId::kInstanceGenerator);
  PackingInstance instance;
  instance.num_resources = m;
  instance.supply = supply;
  instance.agents.resize(n);
  for (AgentData& agent : instance.agents) {
    const int bundles = 1 + static_cast<int>(rng.UniformInt(max_bundles));
    for (int k = 0; k < bundles; ++k) {
      agent.values.push_back(rng.NextUnit());
      std::vector<double> row(m);
      for (double& a : row) a = rng.NextUnit();
      agent.demands.push_back(std::move(row));
    }
  }
  return instance;
}

// Tiny suite used by the oracle comparisons: n <= 6, m <= 3, at most two
// bundles per agent, b in {1, 2, 3}.
inline PackingInstance RandomTinyInstance(uint64_t seed) {
  SeededRng rng(seed, StreamId::kAuditFirst);
  const int n = 1 + static_cast<int>(rng.UniformInt(6));
  const int m = 1 + static_cast<int>(rng.UniformInt(3));
  const double b = 1.0 + static_cast<double>(rng.UniformInt(3));
  return RandomInstance(n, m, 2, b, seed);
}

// Unique path under the test temp directory.
inline std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/privpack_" + name;
}

}  // namespace privpack::testing

#endif  // PRIVPACK_TESTS_TESTING_TEST_UTIL_H_
