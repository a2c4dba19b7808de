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

#ifndef LINKRISK_METRIC_H_
#define LINKRISK_METRIC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "linkrisk/lm.h"

namespace linkrisk {

// All divergences are in bits.

// Kullback-Leibler divergence KL(P||Q). Requires support(P) to be a subset
// of support(Q).
absl::StatusOr<double> KlDivergence(const Distribution& p,
                                    const Distribution& q);

// Jensen-Shannon divergence against the midpoint M = (P+Q)/2, in [0, 1].
// Exactly symmetric: each support point contributes the same floating point
// value regardless of argument order, summed in token order.
double JsDivergence(const Distribution& p, const Distribution& q);

// sqrt(JS), a metric on distributions with values in [0, 1].
double JsDistance(const Distribution& p, const Distribution& q);

// A distribution re-keyed by dense token ids. Ids come from a shared sorted
// vocabulary, so id order equals token order and every result below is
// bit-identical to the string-keyed functions.
struct IndexedDistribution {
  std::vector<std::uint32_t> ids;
  std::vector<double> probs;
};

std::vector<IndexedDistribution> IndexDistributions(
    std::span<const Distribution* const> dists);
std::vector<IndexedDistribution> IndexDistributions(
    std::span<const Distribution> dists);

double JsDivergence(const IndexedDistribution& p,
                    const IndexedDistribution& q);
double JsDistance(const IndexedDistribution& p, const IndexedDistribution& q);

}  // namespace linkrisk

#endif  // LINKRISK_METRIC_H_
