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

#ifndef PRIVPACK_GENERATOR_H_
#define PRIVPACK_GENERATOR_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "privpack/model.h"

namespace privpack {

enum class InstanceKind {
  // Values and demands i.i.d. uniform on [0, 1).
  kUniform,
  // Demands a_ijk = s_i u_ijk with one scale s_i ~ U[0, 1) per agent.
  kCorrelated,
  // Counting-query reduction over b/2 random 0/1 records with m queries;
  // n and the bundle count are implied.
  kHardness,
};

absl::StatusOr<InstanceKind> ParseInstanceKind(const std::string& name);
std::string InstanceKindName(InstanceKind kind);

// Deterministic in all arguments.
absl::StatusOr<PackingInstance> GenerateInstance(InstanceKind kind, int n,
                                                 int m, int bundles,
                                                 double supply, uint64_t seed);

}  // namespace privpack

#endif  // PRIVPACK_GENERATOR_H_
