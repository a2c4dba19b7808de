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

#ifndef LINKRISK_PARALLEL_H_
#define LINKRISK_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace linkrisk {

// Number of workers to use when the caller does not say: the
// LINKRISK_WORKERS environment variable if set to a positive integer,
// otherwise the hardware concurrency (at least 1).
int DefaultWorkerCount();

// Runs fn(i) for every i in [0, n) on up to `workers` threads. fn must only
// write to slots owned by i, so results never depend on the schedule.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn);

}  // namespace linkrisk

#endif  // LINKRISK_PARALLEL_H_
