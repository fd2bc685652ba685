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

// privpack command-line tool.
//
//   privpack solve    --solver dmw --instance x.json --eps 1 --alpha 0.2
//   privpack sweep    --config sweep.json [--output results.csv]
//   privpack audit    laplace --eps-step 1 --trials 1000000
//   privpack audit    concentration --rounds 1000 --m 4 --trials 2000
//   privpack reduce   --workload w.json --b 8 --solver noiseless
//   privpack oracle   --instance tiny.json
//   privpack generate --kind uniform --n 20 --m 3 --ell 2 --b 4 --seed 1
//
// Data goes to stdout (or --output files). Failures print one JSON object on
// stderr and exit with 1 (invalid input) or 2 (guard or runtime failure).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "privpack/experiment.h"
#include "privpack/generator.h"
#include "privpack/hardness_bridge.h"
#include "privpack/model.h"
#include "privpack/privacy.h"
#include "privpack/reference.h"
#include "privpack/report.h"
#include "privpack/solver_dmw.h"

namespace privpack {
namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  if (absl::IsInvalidArgument(status) || absl::IsNotFound(status)) {
    return kExitInvalid;
  }
  return kExitRuntime;
}

int ReportError(const std::string& command, const absl::Status& status) {
  const int code = ExitCodeFor(status);
  json line;
  line["error"] = StatusLabel(status);
  line["command"] = command;
  line["status"] = absl::StatusCodeToString(status.code());
  line["message"] = std::string(status.message());
  line["exit_code"] = code;
  std::cerr << line.dump() << "\n";
  return code;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path, " for writing"));
  }
  out << text;
  out.close();
  if (!out) return absl::InternalError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

// Writes to `path`, or stdout when empty or "-".
absl::Status Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteText(path, text);
}

json NumberOrString(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

struct SolveArgs {
  std::string solver = "dmw";
  std::string instance;
  double eps = 1.0;
  double delta = 0.0;
  double beta = 0.05;
  double alpha = 0.2;
  std::string seed = "0";
  std::optional<int64_t> rounds;
  std::optional<double> margin;
  bool force = false;
  std::string dummy_rule = "carry";
  std::string trace;
  bool trace_gradients = false;
  std::string allocation;
  bool timing = false;
  std::string output;
};

absl::Status RunSolve(const SolveArgs& args) {
  SolveRequest request;
  absl::StatusOr<SolverKind> kind = ParseSolverKind(args.solver);
  if (!kind.ok()) return kind.status();
  request.solver = *kind;
  request.spec = {args.eps, args.delta, args.beta};
  request.alpha = args.alpha;
  absl::StatusOr<uint64_t> seed = ParseSeed(args.seed);
  if (!seed.ok()) return seed.status();
  request.seed = *seed;
  request.rounds_override = args.rounds;
  request.margin = args.margin;
  request.force = args.force;
  request.record_trace = !args.trace.empty();
  if (args.dummy_rule == "carry") {
    request.dummy_rule = DummyRule::kCarry;
  } else if (args.dummy_rule == "reset") {
    request.dummy_rule = DummyRule::kResetToOne;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown dummy rule: ", args.dummy_rule));
  }
  absl::StatusOr<PackingInstance> instance = LoadInstance(args.instance);
  if (!instance.ok()) return instance.status();
  absl::StatusOr<SolveOutcome> outcome = RunSolver(*instance, request);
  if (!outcome.ok()) return outcome.status();

  if (!args.trace.empty()) {
    if (!outcome->trace) {
      return absl::InvalidArgumentError(
          "--trace is only available for the dmw and dmw-exact solvers");
    }
    absl::Status written =
        WriteText(args.trace, TraceToCsv(*outcome->trace, args.trace_gradients));
    if (!written.ok()) return written;
  }
  if (!args.allocation.empty()) {
    absl::Status written =
        WriteText(args.allocation, AllocationToJson(outcome->allocation));
    if (!written.ok()) return written;
  }
  return Emit(args.output, ReportToJson(outcome->report, args.timing) + "\n");
}

struct SweepArgs {
  std::string config;
  std::string output;
  std::optional<int> threads;
  bool timing = false;
};

absl::Status RunSweep(const SweepArgs& args) {
  absl::StatusOr<ExperimentConfig> config = LoadExperimentConfig(args.config);
  if (!config.ok()) return config.status();
  if (args.threads) config->threads = *args.threads;
  if (args.timing) config->include_timing = true;
  absl::StatusOr<std::vector<ExperimentRow>> rows = RunExperiment(*config);
  if (!rows.ok()) return rows.status();
  const std::string path = args.output.empty() ? config->output : args.output;
  return Emit(path, ExperimentRowsToCsv(*rows, config->include_timing));
}

struct AuditLaplaceArgs {
  double eps_step = 1.0;
  int64_t trials = 1'000'000;
  std::string seed = "0";
  int bins = 200;
  int min_count = 100;
};

absl::Status RunAuditLaplace(const AuditLaplaceArgs& args) {
  absl::StatusOr<uint64_t> seed = ParseSeed(args.seed);
  if (!seed.ok()) return seed.status();
  if (!(args.eps_step > 0.0)) {
    return absl::InvalidArgumentError("--eps-step must be > 0 (use inf for "
                                      "the non-private control)");
  }
  AuditConfig config;
  config.noise_scale = std::isinf(args.eps_step) ? 0.0 : 1.0 / args.eps_step;
  config.trials = args.trials;
  config.seed = *seed;
  config.bins = args.bins;
  config.min_count = args.min_count;
  absl::StatusOr<AuditResult> result = AuditMechanism(config);
  if (!result.ok()) return result.status();
  json doc;
  doc["audit"] = "laplace";
  doc["eps_step"] = NumberOrString(args.eps_step);
  doc["noise_scale"] = config.noise_scale;
  doc["trials"] = args.trials;
  doc["seed"] = *seed;
  doc["estimate"] = NumberOrString(result->estimate);
  doc["raw_max_log_ratio"] = NumberOrString(result->raw_max_log_ratio);
  doc["bins_compared"] = result->bins_compared;
  doc["non_private"] = result->non_private;
  std::cout << doc.dump(2) << "\n";
  return absl::OkStatus();
}

struct AuditConcentrationArgs {
  int64_t rounds = 1000;
  int m = 4;
  double p_max = 1.0;
  double eps_step = 1.0;
  double beta = 0.05;
  int64_t trials = 2000;
  std::string seed = "0";
};

absl::Status RunAuditConcentration(const AuditConcentrationArgs& args) {
  absl::StatusOr<uint64_t> seed = ParseSeed(args.seed);
  if (!seed.ok()) return seed.status();
  ConcentrationConfig config;
  config.num_resources = args.m;
  config.rounds = args.rounds;
  config.p_max = args.p_max;
  config.eps_step = args.eps_step;
  config.beta = args.beta;
  config.trials = args.trials;
  config.seed = *seed;
  absl::StatusOr<ConcentrationResult> inner =
      CheckInnerProductConcentration(config);
  if (!inner.ok()) return inner.status();
  absl::StatusOr<ConcentrationResult> overflow =
      CheckTruncationOverflow(config);
  if (!overflow.ok()) return overflow.status();
  json doc;
  doc["audit"] = "concentration";
  doc["rounds"] = args.rounds;
  doc["m"] = args.m;
  doc["p_max"] = args.p_max;
  doc["eps_step"] = args.eps_step;
  doc["beta"] = args.beta;
  doc["trials"] = args.trials;
  doc["seed"] = *seed;
  doc["inner_product"] = {{"threshold", inner->threshold},
                          {"upper_rate", inner->upper_rate},
                          {"lower_rate", inner->lower_rate}};
  doc["overflow"] = {{"threshold", overflow->threshold},
                     {"upper_rate", overflow->upper_rate},
                     {"lower_rate", overflow->lower_rate}};
  std::cout << doc.dump(2) << "\n";
  return absl::OkStatus();
}

struct ReduceArgs {
  std::string workload;
  double b = 0.0;
  std::string solver = "noiseless";
  double eps = 1.0;
  double delta = 0.0;
  double alpha = 0.05;
  std::string seed = "0";
  std::optional<int64_t> rounds;
  bool force = false;
};

absl::Status RunReduce(const ReduceArgs& args) {
  absl::StatusOr<QueryWorkload> workload = LoadWorkload(args.workload);
  if (!workload.ok()) return workload.status();
  const QueryMatrix answers = EvaluateWorkload(*workload);
  absl::StatusOr<ReductionInstance> reduction =
      BuildReductionInstance(answers, args.b);
  if (!reduction.ok()) return reduction.status();

  SolveRequest request;
  absl::StatusOr<SolverKind> kind = ParseSolverKind(args.solver);
  if (!kind.ok()) return kind.status();
  request.solver = *kind;
  request.spec = {args.eps, args.delta, 0.05};
  request.alpha = args.alpha;
  absl::StatusOr<uint64_t> seed = ParseSeed(args.seed);
  if (!seed.ok()) return seed.status();
  request.seed = *seed;
  request.rounds_override = args.rounds;
  request.force = args.force;
  absl::StatusOr<SolveOutcome> outcome =
      RunSolver(reduction->packing, request);
  if (!outcome.ok()) return outcome.status();

  absl::StatusOr<std::vector<double>> released =
      ReleaseQueries(*reduction, outcome->allocation);
  if (!released.ok()) return released.status();
  absl::StatusOr<double> error = EvaluateReleaseAccuracy(answers, *released);
  if (!error.ok()) return error.status();
  absl::StatusOr<double> lower = OptLowerBound(answers, args.b);
  if (!lower.ok()) return lower.status();

  json doc;
  doc["solver"] = args.solver;
  doc["b"] = args.b;
  doc["records"] = static_cast<int>(answers.size());
  doc["queries"] = reduction->packing.num_resources;
  doc["agents"] = reduction->packing.num_agents();
  doc["exact"] = ExactCounts(answers);
  doc["released"] = *released;
  doc["average_error"] = *error;
  doc["objective"] = outcome->report.objective;
  doc["opt_lower_bound"] = *lower;
  doc["feasible"] = outcome->report.feasible;
  std::cout << doc.dump(2) << "\n";
  return absl::OkStatus();
}

struct OracleArgs {
  std::string instance;
  bool as_json = false;
};

absl::Status RunOracle(const OracleArgs& args) {
  absl::StatusOr<PackingInstance> instance = LoadInstance(args.instance);
  if (!instance.ok()) return instance.status();
  absl::StatusOr<OracleResult> oracle = BruteForceOpt(*instance);
  if (!oracle.ok()) return oracle.status();
  if (args.as_json) {
    json doc;
    doc["opt"] = oracle->opt_value;
    doc["method"] = oracle->method;
    doc["enumerated"] = oracle->enumerated;
    doc["allocation"] = json::parse(AllocationToJson(oracle->allocation));
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "OPT " << absl::StrCat(oracle->opt_value) << "\n";
  }
  return absl::OkStatus();
}

struct GenerateArgs {
  std::string kind = "uniform";
  int n = 10;
  int m = 2;
  int ell = 2;
  double b = 2.0;
  std::string seed = "0";
  std::string output;
};

absl::Status RunGenerate(const GenerateArgs& args) {
  absl::StatusOr<InstanceKind> kind = ParseInstanceKind(args.kind);
  if (!kind.ok()) return kind.status();
  absl::StatusOr<uint64_t> seed = ParseSeed(args.seed);
  if (!seed.ok()) return seed.status();
  absl::StatusOr<PackingInstance> instance =
      GenerateInstance(*kind, args.n, args.m, args.ell, args.b, *seed);
  if (!instance.ok()) return instance.status();
  return Emit(args.output, InstanceToJson(*instance));
}

int Main(int argc, char** argv) {
  CLI::App app{"Private packing LP solvers and experiment harness"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Run one solver on one instance");
  solve_cmd->add_option("--solver", solve.solver,
                        "dmw | dmw-exact | domw | domw-online | noiseless | brute");
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON")->required();
  solve_cmd->add_option("--eps", solve.eps, "Privacy epsilon");
  solve_cmd->add_option("--delta", solve.delta, "Privacy delta");
  solve_cmd->add_option("--beta", solve.beta, "Failure probability");
  solve_cmd->add_option("--alpha", solve.alpha, "Accuracy parameter in (0,1)");
  solve_cmd->add_option("--seed", solve.seed, "Seed (decimal or 0x hex)");
  solve_cmd->add_option("--rounds", solve.rounds, "Override the round count T");
  solve_cmd->add_option("--margin", solve.margin,
                        "Supply margin for dmw-exact (default alpha)");
  solve_cmd->add_flag("--force", solve.force, "Ignore the step-size guard");
  solve_cmd->add_option("--dummy-rule", solve.dummy_rule, "carry | reset");
  solve_cmd->add_option("--trace", solve.trace, "Write the per-round trace CSV");
  solve_cmd->add_flag("--trace-gradients", solve.trace_gradients,
                      "Include raw and truncated gradients in the trace");
  solve_cmd->add_option("--allocation", solve.allocation,
                        "Write the allocation JSON");
  solve_cmd->add_flag("--timing", solve.timing, "Include wall time");
  solve_cmd->add_option("--output", solve.output, "Report path (default stdout)");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep_cmd->add_option("--config", sweep.config, "Sweep config JSON")->required();
  sweep_cmd->add_option("--output", sweep.output, "CSV path (default stdout)");
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads");
  sweep_cmd->add_flag("--timing", sweep.timing, "Add a wall_time_ms column");

  CLI::App* audit_cmd = app.add_subcommand("audit", "Privacy audits");
  audit_cmd->require_subcommand(1);
  AuditLaplaceArgs audit_laplace;
  CLI::App* laplace_cmd =
      audit_cmd->add_subcommand("laplace", "Histogram audit of one Laplace step");
  laplace_cmd->add_option("--eps-step", audit_laplace.eps_step,
                          "Per-step epsilon (inf for the zero-noise control)");
  laplace_cmd->add_option("--trials", audit_laplace.trials, "Samples per input");
  laplace_cmd->add_option("--seed", audit_laplace.seed, "Seed");
  laplace_cmd->add_option("--bins", audit_laplace.bins, "Histogram bins");
  laplace_cmd->add_option("--min-count", audit_laplace.min_count,
                          "Minimum samples per bin and side");
  AuditConcentrationArgs audit_conc;
  CLI::App* conc_cmd = audit_cmd->add_subcommand(
      "concentration", "Adaptive noise-sum and overflow concentration checks");
  conc_cmd->add_option("--rounds", audit_conc.rounds, "Rounds T");
  conc_cmd->add_option("--m", audit_conc.m, "Resources");
  conc_cmd->add_option("--p-max", audit_conc.p_max, "Price norm");
  conc_cmd->add_option("--eps-step", audit_conc.eps_step, "Per-step epsilon");
  conc_cmd->add_option("--beta", audit_conc.beta, "Failure probability");
  conc_cmd->add_option("--trials", audit_conc.trials, "Trials");
  conc_cmd->add_option("--seed", audit_conc.seed, "Seed");

  ReduceArgs reduce;
  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "Release counting queries through packing");
  reduce_cmd->add_option("--workload", reduce.workload, "Workload JSON")->required();
  reduce_cmd->add_option("--b", reduce.b, "Supply (even, = 2 x records)")->required();
  reduce_cmd->add_option("--solver", reduce.solver, "Solver name");
  reduce_cmd->add_option("--eps", reduce.eps, "Privacy epsilon");
  reduce_cmd->add_option("--delta", reduce.delta, "Privacy delta");
  reduce_cmd->add_option("--alpha", reduce.alpha, "Accuracy parameter");
  reduce_cmd->add_option("--seed", reduce.seed, "Seed");
  reduce_cmd->add_option("--rounds", reduce.rounds, "Override the round count T");
  reduce_cmd->add_flag("--force", reduce.force, "Ignore the step-size guard");

  OracleArgs oracle;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by enumeration");
  oracle_cmd->add_option("--instance", oracle.instance, "Instance JSON")->required();
  oracle_cmd->add_flag("--json", oracle.as_json, "Emit JSON with the allocation");

  GenerateArgs generate;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "Write a synthetic instance");
  generate_cmd->add_option("--kind", generate.kind,
                           "uniform | correlated | hardness");
  generate_cmd->add_option("--n", generate.n, "Agents");
  generate_cmd->add_option("--m", generate.m, "Resources");
  generate_cmd->add_option("--ell", generate.ell, "Bundles per agent");
  generate_cmd->add_option("--b", generate.b, "Supply");
  generate_cmd->add_option("--seed", generate.seed, "Seed");
  generate_cmd->add_option("--output", generate.output, "Path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("parse", absl::InvalidArgumentError(e.what()));
  }

  absl::Status status;
  std::string command;
  if (*solve_cmd) {
    command = "solve";
    status = RunSolve(solve);
  } else if (*sweep_cmd) {
    command = "sweep";
    status = RunSweep(sweep);
  } else if (*laplace_cmd) {
    command = "audit";
    status = RunAuditLaplace(audit_laplace);
  } else if (*conc_cmd) {
    command = "audit";
    status = RunAuditConcentration(audit_conc);
  } else if (*reduce_cmd) {
    command = "reduce";
    status = RunReduce(reduce);
  } else if (*oracle_cmd) {
    command = "oracle";
    status = RunOracle(oracle);
  } else if (*generate_cmd) {
    command = "generate";
    status = RunGenerate(generate);
  }
  if (!status.ok()) return ReportError(command, status);
  return kExitOk;
}

}  // namespace
}  // namespace privpack

int main(int argc, char** argv) { return privpack::Main(argc, argv); }
