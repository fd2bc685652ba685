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

// Ground-truth oracles used by tests and experiments.

#ifndef PRIVPACK_REFERENCE_H_
#define PRIVPACK_REFERENCE_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "privpack/model.h"
#include "privpack/solver_dmw.h"

namespace privpack {

// BruteForceOpt always completes when prod_i (ell_i + 1) is at most
// kBruteForceProductLimit. Above that it fails once one agent level holds more
// than kBruteForceStateLimit distinct consumption vectors.
inline constexpr int64_t kBruteForceProductLimit = 10'000'000;
inline constexpr int64_t kBruteForceStateLimit = 2'000'000;

struct OracleResult {
  double opt_value = 0.0;
  Allocation allocation;
  // "brute", "noiseless" or "trivial".
  std::string method;
  // (partial allocation, choice) pairs examined.
  int64_t enumerated = 0;
};

// Exact integral optimum. Agents are processed in order; partial allocations
// that reach the same consumption vector are merged keeping the larger value
// (the lexicographically smaller choice sequence on ties, where "no bundle"
// precedes bundle 0). Prefixes that exceed the supply are dropped.
absl::StatusOr<OracleResult> BruteForceOpt(const PackingInstance& instance);

// The dual multiplicative-weights solver with zero noise and T rounds. The
// privacy parameters only enter through T, so none are needed here.
absl::StatusOr<DmwResult> NoiselessDualMwu(const PackingInstance& instance,
                                           double alpha, int64_t rounds);

// Every agent takes its highest-value bundle (smallest index on ties).
// Feasible because each resource is used at most n <= b times. Fails when
// n > b.
absl::StatusOr<Allocation> TrivialAllocate(const PackingInstance& instance);

}  // namespace privpack

#endif  // PRIVPACK_REFERENCE_H_
