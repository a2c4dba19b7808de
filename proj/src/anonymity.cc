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

#include "linkrisk/anonymity.h"

#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "linkrisk/parallel.h"

namespace linkrisk {
namespace {

absl::Status CheckKeys(const std::vector<std::string>& keys) {
  std::unordered_map<std::string, std::size_t> seen;
  for (const std::string& key : keys) {
    if (!seen.emplace(key, 0).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

bool InUnitRange(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

DistanceMatrix::DistanceMatrix(std::vector<std::string> keys,
                               std::vector<double> upper)
    : keys_(std::move(keys)), upper_(std::move(upper)) {
  index_.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) index_.emplace(keys_[i], i);
}

absl::StatusOr<DistanceMatrix> DistanceMatrix::Compute(
    std::vector<std::string> keys, std::span<const IndexedDistribution> dists,
    int workers) {
  if (keys.size() != dists.size()) {
    return absl::InvalidArgumentError("keys and distributions differ in size");
  }
  if (absl::Status s = CheckKeys(keys); !s.ok()) return s;
  const std::size_t n = keys.size();
  std::vector<double> upper(n < 2 ? 0 : n * (n - 1) / 2);
  ParallelFor(n, workers, [&](std::size_t i) {
    std::size_t slot = i * (2 * n - i - 1) / 2;
    for (std::size_t j = i + 1; j < n; ++j) {
      upper[slot++] = JsDistance(dists[i], dists[j]);
    }
  });
  return DistanceMatrix(std::move(keys), std::move(upper));
}

absl::StatusOr<DistanceMatrix> DistanceMatrix::FromPacked(
    std::vector<std::string> keys, std::vector<double> upper) {
  if (absl::Status s = CheckKeys(keys); !s.ok()) return s;
  const std::size_t n = keys.size();
  if (upper.size() != (n < 2 ? 0 : n * (n - 1) / 2)) {
    return absl::InvalidArgumentError("packed triangle has the wrong length");
  }
  for (double v : upper) {
    if (!InUnitRange(v)) {
      return absl::InvalidArgumentError(absl::StrCat("distance ", v, " outside [0, 1]"));
    }
  }
  return DistanceMatrix(std::move(keys), std::move(upper));
}

absl::StatusOr<DistanceMatrix> DistanceMatrix::FromDense(
    std::vector<std::string> keys,
    const std::vector<std::vector<double>>& dense) {
  const std::size_t n = keys.size();
  if (dense.size() != n) return absl::InvalidArgumentError("matrix is not n x n");
  std::vector<double> upper;
  upper.reserve(n < 2 ? 0 : n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (dense[i].size() != n) {
      return absl::InvalidArgumentError("matrix is not n x n");
    }
    if (dense[i][i] != 0.0) {
      return absl::InvalidArgumentError("nonzero diagonal");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dense[i][j] != dense[j][i]) {
        return absl::InvalidArgumentError(
            absl::StrCat("asymmetric entry (", i, ", ", j, ")"));
      }
      upper.push_back(dense[i][j]);
    }
  }
  return FromPacked(std::move(keys), std::move(upper));
}

absl::StatusOr<std::size_t> DistanceMatrix::Index(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  if (it == index_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown profile '", std::string(key), "'"));
  }
  return it->second;
}

DistanceMatrix DistanceMatrix::Subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> keys;
  keys.reserve(indices.size());
  for (std::size_t i : indices) keys.push_back(keys_[i]);
  std::vector<double> upper;
  upper.reserve(indices.size() < 2 ? 0 : indices.size() * (indices.size() - 1) / 2);
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      upper.push_back((*this)(indices[a], indices[b]));
    }
  }
  return DistanceMatrix(std::move(keys), std::move(upper));
}

CrossDistanceMatrix CrossDistanceMatrix::Compute(
    std::vector<std::string> row_keys, std::span<const IndexedDistribution> rows,
    std::vector<std::string> col_keys, std::span<const IndexedDistribution> cols,
    int workers) {
  CrossDistanceMatrix m;
  m.row_keys_ = std::move(row_keys);
  m.col_keys_ = std::move(col_keys);
  const std::size_t nc = cols.size();
  m.values_.resize(rows.size() * nc);
  ParallelFor(rows.size(), workers, [&](std::size_t r) {
    for (std::size_t c = 0; c < nc; ++c) {
      m.values_[r * nc + c] = JsDistance(rows[r], cols[c]);
    }
  });
  return m;
}

std::vector<double> CrossDistanceMatrix::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<std::size_t> ConvergentIndices(const DistanceMatrix& m,
                                           std::size_t subject, double d) {
  std::vector<std::size_t> members;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (j == subject || m(subject, j) <= d) members.push_back(j);
  }
  return members;
}

absl::StatusOr<AnonymityResult> ConvergentSubset(const DistanceMatrix& m,
                                                 std::string_view subject,
                                                 double d) {
  if (!InUnitRange(d)) {
    return absl::InvalidArgumentError(absl::StrCat("radius ", d, " outside [0, 1]"));
  }
  absl::StatusOr<std::size_t> index = m.Index(subject);
  if (!index.ok()) return index.status();
  AnonymityResult result;
  result.subject = std::string(subject);
  result.d = d;
  for (std::size_t j : ConvergentIndices(m, *index, d)) {
    result.members.push_back(m.keys()[j]);
  }
  result.k = result.members.size();
  return result;
}

absl::StatusOr<bool> IsKdAnonymous(const DistanceMatrix& m,
                                   std::string_view subject, std::size_t k,
                                   double d) {
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  absl::StatusOr<AnonymityResult> subset = ConvergentSubset(m, subject, d);
  if (!subset.ok()) return subset.status();
  return subset->k >= k;
}

absl::StatusOr<bool> LemmaBoundCheck(const DistanceMatrix& within,
                                     std::span<const double> to_target,
                                     std::span<const std::size_t> subject_set,
                                     std::size_t star, double c, double d,
                                     double tolerance) {
  if (to_target.size() != within.size()) {
    return absl::InvalidArgumentError("need one target distance per entity");
  }
  if (!(c >= 0.0) || !(d >= 0.0)) {
    return absl::InvalidArgumentError("c and d must be nonnegative");
  }
  if (star >= within.size()) {
    return absl::InvalidArgumentError("matching entity out of range");
  }
  if (!CMatches(to_target[star], c)) {
    return absl::FailedPreconditionError(
        absl::StrCat("matching entity is at ", to_target[star],
                     " from the target, more than c = ", c));
  }
  bool star_in_set = false;
  for (std::size_t i : subject_set) {
    if (i >= within.size()) {
      return absl::InvalidArgumentError("subject set index out of range");
    }
    if (within(star, i) > d) {
      return absl::FailedPreconditionError(absl::StrCat(
          "subject set is not ", d, "-convergent for the matching entity"));
    }
    star_in_set = star_in_set || i == star;
  }
  if (!star_in_set) {
    return absl::FailedPreconditionError(
        "matching entity is not in the subject set");
  }
  for (std::size_t i : subject_set) {
    if (to_target[i] > c + d + tolerance) return false;
  }
  return true;
}

absl::StatusOr<ChoiceScore> ChoiceLikelihood(std::span<const double> distances,
                                             std::size_t chosen) {
  const std::size_t n = distances.size();
  if (n < 2) return absl::InvalidArgumentError("need at least two candidates");
  if (chosen >= n) return absl::InvalidArgumentError("chosen index out of range");
  double sum = 0.0;
  for (double v : distances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError("distances must be finite and >= 0");
    }
    sum += v;
  }
  if (sum <= 0.0) {
    return absl::InvalidArgumentError(
        "degenerate: all candidates identical to target");
  }
  ChoiceScore out;
  out.score = 1.0 - distances[chosen] / sum;
  out.normalized = out.score / static_cast<double>(n - 1);
  return out;
}

absl::StatusOr<ChoiceScore> ChoiceLikelihood(
    const CrossDistanceMatrix& cross, std::span<const std::size_t> candidates,
    std::size_t target_col, std::size_t chosen) {
  if (target_col >= cross.cols()) {
    return absl::InvalidArgumentError("target out of range");
  }
  std::vector<double> distances;
  distances.reserve(candidates.size());
  std::size_t chosen_pos = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] >= cross.rows()) {
      return absl::InvalidArgumentError("candidate out of range");
    }
    if (candidates[i] == chosen) chosen_pos = i;
    distances.push_back(cross(candidates[i], target_col));
  }
  if (chosen_pos == candidates.size()) {
    return absl::InvalidArgumentError("chosen entity is not a candidate");
  }
  return ChoiceLikelihood(distances, chosen_pos);
}

absl::StatusOr<MatchingBound> ComputeMatchingBound(double c, double d,
                                                   std::size_t k) {
  if (c == 0.0) {
    return absl::InvalidArgumentError(
        "bound undefined at zero matching distance");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    return absl::InvalidArgumentError("c must be positive");
  }
  if (!(d >= 0.0) || !std::isfinite(d)) {
    return absl::InvalidArgumentError("d must be nonnegative");
  }
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  MatchingBound bound{c, d, k, 0.0};
  bound.t = 1.0 - c / (c + static_cast<double>(k - 1) * (c + d));
  return bound;
}

absl::StatusOr<double> UnlinkabilitySigma(double c, double d, std::size_t k) {
  absl::StatusOr<MatchingBound> bound = ComputeMatchingBound(c, d, k);
  if (!bound.ok()) return bound.status();
  return bound->t;
}

}  // namespace linkrisk
