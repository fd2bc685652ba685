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

#ifndef PRIVPACK_STATUS_MACROS_H_
#define PRIVPACK_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PRIVPACK_RETURN_IF_ERROR(expr)        \
  do {                                        \
    const absl::Status _status = (expr);      \
    if (!_status.ok()) return _status;        \
  } while (0)

#define PRIVPACK_STATUS_CONCAT_INNER(a, b) a##b
#define PRIVPACK_STATUS_CONCAT(a, b) PRIVPACK_STATUS_CONCAT_INNER(a, b)

#define PRIVPACK_ASSIGN_OR_RETURN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                   \
  if (!statusor.ok()) return statusor.status();              \
  lhs = std::move(statusor).value()

#define PRIVPACK_ASSIGN_OR_RETURN(lhs, rexpr) \
  PRIVPACK_ASSIGN_OR_RETURN_IMPL(             \
      PRIVPACK_STATUS_CONCAT(_statusor_, __LINE__), lhs, rexpr)

#endif  // PRIVPACK_STATUS_MACROS_H_
