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

#include "privpack/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "file_util.h"
#include "json.hpp"
#include "privpack/reference.h"
#include "privpack/status_macros.h"

namespace privpack {
namespace {

using json = nlohmann::json;

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.12g", v);
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string ParameterOrEmpty(const SolverReport& report,
                             const std::string& name) {
  const std::optional<double> value = report.Parameter(name);
  return value ? FormatDouble(*value) : "";
}

template <typename T>
absl::StatusOr<std::vector<T>> ReadGrid(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    return absl::InvalidArgumentError(
        absl::StrCat("config error: missing grid \"", key, "\""));
  }
  const json& node = doc.at(key);
  std::vector<T> grid;
  try {
    if (node.is_array()) {
      for (const json& v : node) grid.push_back(v.get<T>());
    } else {
      grid.push_back(node.get<T>());
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config error at '", key, "': ", e.what()));
  }
  return grid;
}

absl::StatusOr<uint64_t> ReadSeed(const json& node) {
  if (node.is_number_unsigned()) return node.get<uint64_t>();
  if (node.is_number_integer()) {
    const int64_t v = node.get<int64_t>();
    if (v < 0) return absl::InvalidArgumentError("seeds must be nonnegative");
    return static_cast<uint64_t>(v);
  }
  if (node.is_string()) return ParseSeed(node.get<std::string>());
  return absl::InvalidArgumentError("seeds must be integers or strings");
}

}  // namespace

absl::StatusOr<SolverKind> ParseSolverKind(const std::string& name) {
  if (name == "dmw") return SolverKind::kDmw;
  if (name == "dmw-exact") return SolverKind::kDmwExact;
  if (name == "domw") return SolverKind::kDomw;
  if (name == "domw-online") return SolverKind::kDomwOnline;
  if (name == "noiseless") return SolverKind::kNoiseless;
  if (name == "brute") return SolverKind::kBrute;
  return absl::InvalidArgumentError(absl::StrCat("unknown solver: ", name));
}

std::string SolverKindName(SolverKind kind) {
  switch (kind) {
    case SolverKind::kDmw:
      return "dmw";
    case SolverKind::kDmwExact:
      return "dmw-exact";
    case SolverKind::kDomw:
      return "domw";
    case SolverKind::kDomwOnline:
      return "domw-online";
    case SolverKind::kNoiseless:
      return "noiseless";
    case SolverKind::kBrute:
      return "brute";
  }
  return "unknown";
}

absl::StatusOr<ReferenceKind> ParseReferenceKind(const std::string& name) {
  if (name == "none") return ReferenceKind::kNone;
  if (name == "brute") return ReferenceKind::kBrute;
  if (name == "noiseless") return ReferenceKind::kNoiseless;
  return absl::InvalidArgumentError(absl::StrCat("unknown reference: ", name));
}

std::string ReferenceKindName(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::kNone:
      return "none";
    case ReferenceKind::kBrute:
      return "brute";
    case ReferenceKind::kNoiseless:
      return "noiseless";
  }
  return "unknown";
}

absl::StatusOr<SolveOutcome> RunSolver(const PackingInstance& instance,
                                       const SolveRequest& request) {
  SolveOutcome outcome;
  switch (request.solver) {
    case SolverKind::kDmw:
    case SolverKind::kDmwExact: {
      DmwOptions options;
      options.rounds_override = request.rounds_override;
      options.force = request.force;
      options.record_trace = request.record_trace;
      absl::StatusOr<DmwResult> result =
          request.solver == SolverKind::kDmw
              ? RunPriDmw(instance, request.spec, request.alpha, request.seed,
                          options)
              : RunPriDmwExactFeasible(instance, request.spec, request.alpha,
                                       request.seed, options, request.margin);
      if (!result.ok()) return result.status();
      outcome.report = std::move(result->report);
      outcome.allocation = std::move(result->allocation);
      outcome.trace = std::move(result->trace);
      return outcome;
    }
    case SolverKind::kNoiseless: {
      const int64_t rounds =
          request.rounds_override.value_or(request.noiseless_rounds);
      PRIVPACK_ASSIGN_OR_RETURN(
          DmwResult result, NoiselessDualMwu(instance, request.alpha, rounds));
      outcome.report = std::move(result.report);
      outcome.allocation = std::move(result.allocation);
      return outcome;
    }
    case SolverKind::kDomw:
    case SolverKind::kDomwOnline: {
      DomwOptions options;
      options.force = request.force;
      options.dummy_rule = request.dummy_rule;
      if (request.solver == SolverKind::kDomwOnline) {
        std::vector<int> order(instance.agents.size());
        std::iota(order.begin(), order.end(), 0);
        options.permutation = std::move(order);
      }
      PRIVPACK_ASSIGN_OR_RETURN(
          DomwResult result, RunPriDomw(instance, request.spec, request.alpha,
                                        request.seed, options));
      outcome.report = std::move(result.report);
      outcome.report.solver = SolverKindName(request.solver);
      outcome.allocation = std::move(result.allocation);
      outcome.payments = std::move(result.payments);
      return outcome;
    }
    case SolverKind::kBrute: {
      const auto start = std::chrono::steady_clock::now();
      PRIVPACK_ASSIGN_OR_RETURN(OracleResult oracle, BruteForceOpt(instance));
      PRIVPACK_ASSIGN_OR_RETURN(
          AllocationMetrics metrics,
          EvaluateAllocation(instance, oracle.allocation));
      SolverReport& report = outcome.report;
      report.solver = "brute";
      report.method = oracle.method;
      report.seed = request.seed;
      report.SetMetrics(metrics);
      report.AddParameter("supply", instance.supply);
      report.AddParameter("enumerated", static_cast<double>(oracle.enumerated));
      report.wall_time_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start)
                                .count();
      outcome.allocation = std::move(oracle.allocation);
      return outcome;
    }
  }
  return absl::InternalError("unhandled solver kind");
}

absl::StatusOr<double> ComputeReference(const PackingInstance& instance,
                                        ReferenceKind kind, double alpha,
                                        int64_t rounds) {
  switch (kind) {
    case ReferenceKind::kNone:
      return absl::InvalidArgumentError("no reference requested");
    case ReferenceKind::kBrute: {
      PRIVPACK_ASSIGN_OR_RETURN(OracleResult oracle, BruteForceOpt(instance));
      return oracle.opt_value;
    }
    case ReferenceKind::kNoiseless: {
      PRIVPACK_ASSIGN_OR_RETURN(DmwResult result,
                                NoiselessDualMwu(instance, alpha, rounds));
      return result.report.objective;
    }
  }
  return absl::InternalError("unhandled reference kind");
}

std::string StatusLabel(const absl::Status& status) {
  if (status.ok()) return "ok";
  if (absl::IsFailedPrecondition(status)) return "param_guard";
  if (absl::IsInvalidArgument(status)) return "invalid";
  return "error";
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& config) {
  const auto nonempty = [](const auto& grid, const char* name) {
    return grid.empty() ? absl::InvalidArgumentError(absl::StrCat(
                              "config error: grid \"", name, "\" is empty"))
                        : absl::OkStatus();
  };
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.n, "n"));
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.m, "m"));
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.b, "b"));
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.epsilon, "epsilon"));
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.delta, "delta"));
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.alpha, "alpha"));
  PRIVPACK_RETURN_IF_ERROR(nonempty(config.seeds, "seeds"));
  const std::set<uint64_t> distinct(config.seeds.begin(), config.seeds.end());
  if (distinct.size() != config.seeds.size()) {
    return absl::InvalidArgumentError("config error: seeds must be distinct");
  }
  if (config.bundles < 1) {
    return absl::InvalidArgumentError("config error: bundles must be >= 1");
  }
  if (config.threads < 1) {
    return absl::InvalidArgumentError("config error: threads must be >= 1");
  }
  if (config.reference_rounds < 1) {
    return absl::InvalidArgumentError(
        "config error: reference_rounds must be >= 1");
  }
  if (config.rounds_override && *config.rounds_override < 1) {
    return absl::InvalidArgumentError(
        "config error: rounds_override must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config parse error: ", e.what()));
  }
  if (!doc.is_object()) {
    return absl::InvalidArgumentError("config parse error: expected an object");
  }
  ExperimentConfig config;
  try {
    if (doc.contains("solver")) {
      PRIVPACK_ASSIGN_OR_RETURN(
          config.solver, ParseSolverKind(doc.at("solver").get<std::string>()));
    }
    if (doc.contains("kind")) {
      PRIVPACK_ASSIGN_OR_RETURN(
          config.kind, ParseInstanceKind(doc.at("kind").get<std::string>()));
    }
    if (doc.contains("reference")) {
      PRIVPACK_ASSIGN_OR_RETURN(
          config.reference,
          ParseReferenceKind(doc.at("reference").get<std::string>()));
    }
    if (doc.contains("bundles")) config.bundles = doc.at("bundles").get<int>();
    if (doc.contains("beta")) config.beta = doc.at("beta").get<double>();
    if (doc.contains("reference_rounds")) {
      config.reference_rounds = doc.at("reference_rounds").get<int64_t>();
    }
    if (doc.contains("threads")) config.threads = doc.at("threads").get<int>();
    if (doc.contains("include_timing")) {
      config.include_timing = doc.at("include_timing").get<bool>();
    }
    if (doc.contains("rounds_override") && !doc.at("rounds_override").is_null()) {
      config.rounds_override = doc.at("rounds_override").get<int64_t>();
    }
    if (doc.contains("output")) {
      config.output = doc.at("output").get<std::string>();
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config parse error: ", e.what()));
  }
  PRIVPACK_ASSIGN_OR_RETURN(config.n, ReadGrid<int>(doc, "n"));
  PRIVPACK_ASSIGN_OR_RETURN(config.m, ReadGrid<int>(doc, "m"));
  PRIVPACK_ASSIGN_OR_RETURN(config.b, ReadGrid<double>(doc, "b"));
  PRIVPACK_ASSIGN_OR_RETURN(config.epsilon, ReadGrid<double>(doc, "epsilon"));
  PRIVPACK_ASSIGN_OR_RETURN(config.delta, ReadGrid<double>(doc, "delta"));
  PRIVPACK_ASSIGN_OR_RETURN(config.alpha, ReadGrid<double>(doc, "alpha"));
  if (!doc.contains("seeds")) {
    return absl::InvalidArgumentError("config error: missing grid \"seeds\"");
  }
  const json& seeds = doc.at("seeds");
  if (seeds.is_array()) {
    for (const json& s : seeds) {
      PRIVPACK_ASSIGN_OR_RETURN(uint64_t seed, ReadSeed(s));
      config.seeds.push_back(seed);
    }
  } else {
    PRIVPACK_ASSIGN_OR_RETURN(uint64_t seed, ReadSeed(seeds));
    config.seeds.push_back(seed);
  }
  PRIVPACK_RETURN_IF_ERROR(ValidateExperimentConfig(config));
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  PRIVPACK_ASSIGN_OR_RETURN(std::string text, internal::ReadFile(path));
  return ParseExperimentConfig(text);
}

std::vector<std::string> ExperimentCsvColumns(bool include_timing) {
  std::vector<std::string> columns = {
      "solver",  "kind",          "n",
      "m",       "ell",           "b",
      "epsilon", "delta",         "alpha",
      "seed",    "status",        "objective",
      "opt_reference", "gap",     "max_violation",
      "feasible", "rounds",       "clamp_events",
      "best_response_evaluations", "T", "eta",
      "p_max",   "eps_step",      "grad_max",
      "sigma",   "message"};
  if (include_timing) columns.push_back("wall_time_ms");
  return columns;
}

namespace {

struct GridPoint {
  int n;
  int m;
  double b;
  double epsilon;
  double delta;
  double alpha;
  uint64_t seed;
};

ExperimentRow RunOne(const ExperimentConfig& config, const GridPoint& point) {
  ExperimentRow row;
  row.solver = SolverKindName(config.solver);
  row.kind = InstanceKindName(config.kind);
  row.n = point.n;
  row.m = point.m;
  row.ell = config.bundles;
  row.b = point.b;
  row.epsilon = point.epsilon;
  row.delta = point.delta;
  row.alpha = point.alpha;
  row.seed = point.seed;

  const auto fail = [&row](const absl::Status& status) {
    row.status = StatusLabel(status);
    row.message = std::string(status.message());
    return row;
  };

  absl::StatusOr<PackingInstance> instance =
      GenerateInstance(config.kind, point.n, point.m, config.bundles, point.b,
                       point.seed);
  if (!instance.ok()) return fail(instance.status());

  SolveRequest request;
  request.solver = config.solver;
  request.spec = {point.epsilon, point.delta, config.beta};
  request.alpha = point.alpha;
  request.seed = point.seed;
  request.rounds_override = config.rounds_override;
  request.noiseless_rounds = config.reference_rounds;
  absl::StatusOr<SolveOutcome> outcome = RunSolver(*instance, request);
  if (!outcome.ok()) return fail(outcome.status());

  SolverReport report = std::move(outcome->report);
  if (config.reference != ReferenceKind::kNone) {
    absl::StatusOr<double> reference =
        ComputeReference(*instance, config.reference, point.alpha,
                         config.reference_rounds);
    if (!reference.ok()) {
      report.warnings.push_back(absl::StrCat(
          "reference unavailable: ", reference.status().message()));
    } else {
      report.SetReference(*reference);
    }
  }
  row.status = "ok";
  row.message = absl::StrJoin(report.warnings, "; ");
  row.report = std::move(report);
  return row;
}

}  // namespace

absl::StatusOr<std::vector<ExperimentRow>> RunExperiment(
    const ExperimentConfig& config) {
  PRIVPACK_RETURN_IF_ERROR(ValidateExperimentConfig(config));
  std::vector<GridPoint> points;
  for (int n : config.n) {
    for (int m : config.m) {
      for (double b : config.b) {
        for (double eps : config.epsilon) {
          for (double delta : config.delta) {
            for (double alpha : config.alpha) {
              for (uint64_t seed : config.seeds) {
                points.push_back({n, m, b, eps, delta, alpha, seed});
              }
            }
          }
        }
      }
    }
  }

  std::vector<ExperimentRow> rows(points.size());
  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < points.size();
         i = next.fetch_add(1)) {
      rows[i] = RunOne(config, points[i]);
    }
  };
  const int threads = std::min<int>(config.threads,
                                    static_cast<int>(points.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return rows;
}

std::string ExperimentRowsToCsv(const std::vector<ExperimentRow>& rows,
                                bool include_timing) {
  std::string out = absl::StrJoin(ExperimentCsvColumns(include_timing), ",");
  out += "\n";
  for (const ExperimentRow& row : rows) {
    std::vector<std::string> fields = {
        row.solver,
        row.kind,
        absl::StrCat(row.n),
        absl::StrCat(row.m),
        absl::StrCat(row.ell),
        FormatDouble(row.b),
        FormatDouble(row.epsilon),
        FormatDouble(row.delta),
        FormatDouble(row.alpha),
        absl::StrCat(row.seed),
        row.status};
    if (row.report) {
      const SolverReport& r = *row.report;
      fields.push_back(FormatDouble(r.objective));
      fields.push_back(r.opt_reference ? FormatDouble(*r.opt_reference) : "");
      fields.push_back(r.gap ? FormatDouble(*r.gap) : "");
      fields.push_back(FormatDouble(r.max_violation));
      fields.push_back(r.feasible ? "1" : "0");
      fields.push_back(absl::StrCat(r.rounds));
      fields.push_back(absl::StrCat(r.clamp_events));
      fields.push_back(absl::StrCat(r.best_response_evaluations));
      fields.push_back(ParameterOrEmpty(r, "T"));
      fields.push_back(ParameterOrEmpty(r, "eta"));
      fields.push_back(ParameterOrEmpty(r, "p_max"));
      fields.push_back(ParameterOrEmpty(r, "eps_step"));
      fields.push_back(ParameterOrEmpty(r, "grad_max"));
      fields.push_back(ParameterOrEmpty(r, "sigma"));
    } else {
      fields.resize(fields.size() + 14);
    }
    fields.push_back(CsvField(row.message));
    if (include_timing) {
      fields.push_back(row.report ? FormatDouble(row.report->wall_time_ms)
                                  : "");
    }
    out += absl::StrJoin(fields, ",");
    out += "\n";
  }
  return out;
}

}  // namespace privpack
