// Copyright 2026 The linkrisk Authors
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

#ifndef LINKRISK_STATUS_MACROS_H_
#define LINKRISK_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define LINKRISK_CONCAT_INNER_(a, b) a##b
#define LINKRISK_CONCAT_(a, b) LINKRISK_CONCAT_INNER_(a, b)

#define LINKRISK_RETURN_IF_ERROR(expr)          \
  do {                                          \
    const absl::Status _status = (expr);        \
    if (!_status.ok()) return _status;          \
  } while (0)

#define LINKRISK_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                    \
  if (!tmp.ok()) return tmp.status();                   \
  lhs = std::move(tmp).value()

// Usage: LINKRISK_ASSIGN_OR_RETURN(auto x, ComputeX());
#define LINKRISK_ASSIGN_OR_RETURN(lhs, expr) \
  LINKRISK_ASSIGN_OR_RETURN_IMPL_(           \
      LINKRISK_CONCAT_(_statusor_, __LINE__), lhs, expr)

#endif  // LINKRISK_STATUS_MACROS_H_
