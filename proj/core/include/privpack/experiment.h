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

// Solver dispatch and parameter sweeps.
//
// A sweep is the Cartesian product of the grids over n, m, b, epsilon, delta
// and alpha, times the seed list. Each run generates its instance from the
// run seed, so every CSV row can be reproduced in isolation. Runs execute on a
// worker pool; rows are emitted in enumeration order (n, m, b, epsilon, delta,
// alpha, then seed, each in config order) regardless of scheduling.

#ifndef PRIVPACK_EXPERIMENT_H_
#define PRIVPACK_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privpack/generator.h"
#include "privpack/model.h"
#include "privpack/privacy.h"
#include "privpack/report.h"
#include "privpack/solver_dmw.h"
#include "privpack/solver_domw.h"

namespace privpack {

enum class SolverKind {
  kDmw,
  kDmwExact,
  kDomw,
  kDomwOnline,
  kNoiseless,
  kBrute,
};

absl::StatusOr<SolverKind> ParseSolverKind(const std::string& name);
std::string SolverKindName(SolverKind kind);

enum class ReferenceKind { kNone, kBrute, kNoiseless };

absl::StatusOr<ReferenceKind> ParseReferenceKind(const std::string& name);
std::string ReferenceKindName(ReferenceKind kind);

struct SolveRequest {
  SolverKind solver = SolverKind::kDmw;
  PrivacySpec spec;
  double alpha = 0.2;
  uint64_t seed = 0;
  std::optional<int64_t> rounds_override;
  bool force = false;
  bool record_trace = false;
  DummyRule dummy_rule = DummyRule::kCarry;
  // Wrapper margin for dmw-exact; defaults to alpha.
  std::optional<double> margin;
  // Round count for the noiseless solver when no override is given.
  int64_t noiseless_rounds = 2000;
};

struct SolveOutcome {
  SolverReport report;
  Allocation allocation;
  std::optional<DmwTrace> trace;
  // Per-agent payments (domw and domw-online only).
  std::vector<double> payments;
};

// Runs one solver on one instance. domw-online serves agents in instance
// order; domw samples a uniform visiting order from the seed.
absl::StatusOr<SolveOutcome> RunSolver(const PackingInstance& instance,
                                       const SolveRequest& request);

// Computes the reference optimum of `instance` for gap reporting.
absl::StatusOr<double> ComputeReference(const PackingInstance& instance,
                                        ReferenceKind kind, double alpha,
                                        int64_t rounds);

// "param_guard" for failed preconditions (step-size guard), "invalid" for
// invalid arguments, "error" otherwise.
std::string StatusLabel(const absl::Status& status);

struct ExperimentConfig {
  SolverKind solver = SolverKind::kDmw;
  InstanceKind kind = InstanceKind::kUniform;
  std::vector<int> n;
  std::vector<int> m;
  std::vector<double> b;
  std::vector<double> epsilon;
  std::vector<double> delta;
  std::vector<double> alpha;
  std::vector<uint64_t> seeds;
  int bundles = 2;
  double beta = 0.05;
  std::optional<int64_t> rounds_override;
  ReferenceKind reference = ReferenceKind::kNone;
  int64_t reference_rounds = 2000;
  int threads = 1;
  bool include_timing = false;
  // Optional output path; empty means the caller decides.
  std::string output;
};

absl::Status ValidateExperimentConfig(const ExperimentConfig& config);

// Parses the sweep config JSON; scalar grid entries are accepted as
// one-element grids. Seeds may be integers or decimal/hex strings.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const std::string& text);
absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path);

struct ExperimentRow {
  std::string solver;
  std::string kind;
  int n = 0;
  int m = 0;
  int ell = 0;
  double b = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  uint64_t seed = 0;
  std::string status;
  // Present when status is "ok".
  std::optional<SolverReport> report;
  std::string message;
};

// Fixed column order of the sweep CSV.
std::vector<std::string> ExperimentCsvColumns(bool include_timing);

// Runs every grid point and seed. Per-run failures become rows; only an
// invalid config fails the whole call.
absl::StatusOr<std::vector<ExperimentRow>> RunExperiment(
    const ExperimentConfig& config);

std::string ExperimentRowsToCsv(const std::vector<ExperimentRow>& rows,
                                bool include_timing);

}  // namespace privpack

#endif  // PRIVPACK_EXPERIMENT_H_
