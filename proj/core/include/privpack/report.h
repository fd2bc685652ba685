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

#ifndef PRIVPACK_REPORT_H_
#define PRIVPACK_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privpack/model.h"

namespace privpack {

// Outcome of one solver run. `parameters` echoes every derived quantity in a
// fixed order so a run can be re-derived from the report alone.
struct SolverReport {
  std::string solver;
  // "dmw", "domw", "trivial", "brute", ...
  std::string method;
  double objective = 0.0;
  std::vector<double> consumption;
  double max_violation = 0.0;
  bool feasible = true;
  std::optional<double> opt_reference;
  std::optional<double> gap;
  int64_t rounds = 0;
  int64_t clamp_events = 0;
  int64_t best_response_evaluations = 0;
  double wall_time_ms = 0.0;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::string> warnings;

  void SetMetrics(const AllocationMetrics& metrics);
  // Sets opt_reference and gap = reference - objective.
  void SetReference(double reference);
  void AddParameter(std::string name, double value);
  std::optional<double> Parameter(const std::string& name) const;
};

// JSON object; wall time is included only when `include_timing`.
std::string ReportToJson(const SolverReport& report, bool include_timing);

std::string AllocationToJson(const Allocation& alloc);

}  // namespace privpack

#endif  // PRIVPACK_REPORT_H_
