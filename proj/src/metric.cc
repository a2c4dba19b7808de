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

#include "linkrisk/metric.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "absl/strings/str_cat.h"

namespace linkrisk {
namespace {

// Contribution of one support point to KL(P||M) + KL(Q||M). Written so that
// swapping p and q yields the identical double.
inline double JsTerm(double p, double q) {
  if (p > 0.0 && q > 0.0) {
    const double m = 0.5 * (p + q);
    return p * std::log2(p / m) + q * std::log2(q / m);
  }
  // Only one side present: that side's mass times log2(2).
  return p + q;
}

inline double FinishJs(double sum) {
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

}  // namespace

absl::StatusOr<double> KlDivergence(const Distribution& p,
                                    const Distribution& q) {
  const auto& pe = p.entries();
  const auto& qe = q.entries();
  double sum = 0.0;
  std::size_t j = 0;
  for (const auto& [token, pw] : pe) {
    while (j < qe.size() && qe[j].first < token) ++j;
    if (j == qe.size() || qe[j].first != token) {
      return absl::InvalidArgumentError(absl::StrCat(
          "KL undefined: '", token, "' has no mass in the second argument"));
    }
    sum += pw * std::log2(pw / qe[j].second);
  }
  return std::max(sum, 0.0);
}

double JsDivergence(const Distribution& p, const Distribution& q) {
  const auto& pe = p.entries();
  const auto& qe = q.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  double sum = 0.0;
  while (i < pe.size() || j < qe.size()) {
    if (j == qe.size() || (i < pe.size() && pe[i].first < qe[j].first)) {
      sum += JsTerm(pe[i++].second, 0.0);
    } else if (i == pe.size() || qe[j].first < pe[i].first) {
      sum += JsTerm(0.0, qe[j++].second);
    } else {
      sum += JsTerm(pe[i++].second, qe[j++].second);
    }
  }
  return FinishJs(sum);
}

double JsDistance(const Distribution& p, const Distribution& q) {
  return std::sqrt(JsDivergence(p, q));
}

std::vector<IndexedDistribution> IndexDistributions(
    std::span<const Distribution* const> dists) {
  std::vector<std::string_view> vocabulary;
  for (const Distribution* d : dists) {
    for (const auto& [token, prob] : d->entries()) vocabulary.push_back(token);
  }
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()),
                   vocabulary.end());

  std::vector<IndexedDistribution> out(dists.size());
  for (std::size_t k = 0; k < dists.size(); ++k) {
    const auto& entries = dists[k]->entries();
    IndexedDistribution& indexed = out[k];
    indexed.ids.reserve(entries.size());
    indexed.probs.reserve(entries.size());
    auto hint = vocabulary.begin();
    for (const auto& [token, prob] : entries) {
      hint = std::lower_bound(hint, vocabulary.end(), std::string_view(token));
      indexed.ids.push_back(
          static_cast<std::uint32_t>(hint - vocabulary.begin()));
      indexed.probs.push_back(prob);
    }
  }
  return out;
}

std::vector<IndexedDistribution> IndexDistributions(
    std::span<const Distribution> dists) {
  std::vector<const Distribution*> ptrs;
  ptrs.reserve(dists.size());
  for (const Distribution& d : dists) ptrs.push_back(&d);
  return IndexDistributions(std::span<const Distribution* const>(ptrs));
}

double JsDivergence(const IndexedDistribution& p,
                    const IndexedDistribution& q) {
  const std::size_t np = p.ids.size();
  const std::size_t nq = q.ids.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double sum = 0.0;
  while (i < np || j < nq) {
    if (j == nq || (i < np && p.ids[i] < q.ids[j])) {
      sum += JsTerm(p.probs[i++], 0.0);
    } else if (i == np || q.ids[j] < p.ids[i]) {
      sum += JsTerm(0.0, q.probs[j++]);
    } else {
      sum += JsTerm(p.probs[i++], q.probs[j++]);
    }
  }
  return FinishJs(sum);
}

double JsDistance(const IndexedDistribution& p, const IndexedDistribution& q) {
  return std::sqrt(JsDivergence(p, q));
}

}  // namespace linkrisk
