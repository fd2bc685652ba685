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

#include "privpack/generator.h"

#include "absl/strings/str_cat.h"
#include "privpack/hardness_bridge.h"
#include "privpack/privacy.h"
#include "privpack/status_macros.h"

namespace privpack {

absl::StatusOr<InstanceKind> ParseInstanceKind(const std::string& name) {
  if (name == "uniform") return InstanceKind::kUniform;
  if (name == "correlated") return InstanceKind::kCorrelated;
  if (name == "hardness") return InstanceKind::kHardness;
  return absl::InvalidArgumentError(absl::StrCat("unknown instance kind: ", name));
}

std::string InstanceKindName(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kUniform:
      return "uniform";
    case InstanceKind::kCorrelated:
      return "correlated";
    case InstanceKind::kHardness:
      return "hardness";
  }
  return "unknown";
}

absl::StatusOr<PackingInstance> GenerateInstance(InstanceKind kind, int n,
                                                 int m, int bundles,
                                                 double supply, uint64_t seed) {
  SeededRng rng(seed, StreamId::kInstanceGenerator);
  if (kind == InstanceKind::kHardness) {
    if (!(supply >= 2.0)) {
      return absl::InvalidArgumentError("hardness instances need b >= 2");
    }
    const int records = static_cast<int>(supply / 2);
    QueryMatrix answers(records, std::vector<double>(m, 0.0));
    for (auto& row : answers) {
      for (double& v : row) v = rng.UniformInt(2) == 1 ? 1.0 : 0.0;
    }
    PRIVPACK_ASSIGN_OR_RETURN(ReductionInstance reduction,
                              BuildReductionInstance(answers, supply));
    return reduction.packing;
  }
  if (n < 1 || m < 1 || bundles < 1) {
    return absl::InvalidArgumentError("n, m and bundles must be >= 1");
  }
  if (!(supply >= 0.0)) return absl::InvalidArgumentError("supply must be >= 0");

  PackingInstance instance;
  instance.num_resources = m;
  instance.supply = supply;
  instance.agents.resize(n);
  for (AgentData& agent : instance.agents) {
    const double scale = kind == InstanceKind::kCorrelated ? rng.NextUnit() : 1.0;
    agent.values.resize(bundles);
    agent.demands.assign(bundles, std::vector<double>(m));
    for (int k = 0; k < bundles; ++k) {
      agent.values[k] = rng.NextUnit();
      for (int j = 0; j < m; ++j) agent.demands[k][j] = scale * rng.NextUnit();
    }
  }
  return instance;
}

}  // namespace privpack
