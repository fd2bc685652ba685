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

#include "privpack/report.h"

#include <cmath>

#include "json.hpp"

namespace privpack {
namespace {

using nlohmann::ordered_json;

// JSON has no infinities; they are written as strings.
ordered_json Number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void SolverReport::SetMetrics(const AllocationMetrics& metrics) {
  objective = metrics.objective;
  consumption = metrics.consumption;
  max_violation = metrics.max_violation;
  feasible = metrics.feasible;
}

void SolverReport::SetReference(double reference) {
  opt_reference = reference;
  gap = reference - objective;
}

void SolverReport::AddParameter(std::string name, double value) {
  parameters.emplace_back(std::move(name), value);
}

std::optional<double> SolverReport::Parameter(const std::string& name) const {
  for (const auto& [key, value] : parameters) {
    if (key == name) return value;
  }
  return std::nullopt;
}

std::string ReportToJson(const SolverReport& report, bool include_timing) {
  ordered_json doc;
  doc["solver"] = report.solver;
  doc["method"] = report.method;
  doc["seed"] = report.seed;
  doc["objective"] = Number(report.objective);
  doc["opt_reference"] =
      report.opt_reference ? Number(*report.opt_reference) : ordered_json();
  doc["gap"] = report.gap ? Number(*report.gap) : ordered_json();
  doc["max_violation"] = Number(report.max_violation);
  doc["feasible"] = report.feasible;
  doc["consumption"] = report.consumption;
  doc["rounds"] = report.rounds;
  doc["clamp_events"] = report.clamp_events;
  doc["best_response_evaluations"] = report.best_response_evaluations;
  if (include_timing) doc["wall_time_ms"] = report.wall_time_ms;
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : report.parameters) params[key] = Number(value);
  doc["parameters"] = std::move(params);
  doc["warnings"] = report.warnings;
  return doc.dump();
}

std::string AllocationToJson(const Allocation& alloc) {
  return ordered_json(alloc.x).dump();
}

}  // namespace privpack
