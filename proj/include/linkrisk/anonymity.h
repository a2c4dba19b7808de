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

#ifndef LINKRISK_ANONYMITY_H_
#define LINKRISK_ANONYMITY_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "linkrisk/metric.h"

namespace linkrisk {

// Slack allowed when a check compares sums of computed distances.
inline constexpr double kMetricTolerance = 1e-9;

// Symmetric pairwise distances over a keyed profile set, zero diagonal,
// stored as the packed strict upper triangle in row-major order.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  // dist(i, j) = JsDistance(dists[i], dists[j]).
  static absl::StatusOr<DistanceMatrix> Compute(
      std::vector<std::string> keys,
      std::span<const IndexedDistribution> dists, int workers);
  // Validates keys (unique), size and range [0, 1].
  static absl::StatusOr<DistanceMatrix> FromPacked(std::vector<std::string> keys,
                                                   std::vector<double> upper);
  // Validates symmetry, zero diagonal and range.
  static absl::StatusOr<DistanceMatrix> FromDense(
      std::vector<std::string> keys,
      const std::vector<std::vector<double>>& dense);

  std::size_t size() const { return keys_.size(); }
  const std::vector<std::string>& keys() const { return keys_; }
  const std::vector<double>& packed() const { return upper_; }
  absl::StatusOr<std::size_t> Index(std::string_view key) const;

  double operator()(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return upper_[PackedIndex(i, j)];
  }

  // The sub-collection with the given members, in the given order.
  DistanceMatrix Subset(std::span<const std::size_t> indices) const;

 private:
  DistanceMatrix(std::vector<std::string> keys, std::vector<double> upper);

  std::size_t PackedIndex(std::size_t i, std::size_t j) const {
    const std::size_t n = keys_.size();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
  }

  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> upper_;
};

// Rectangular distances between two profile sets (e.g. two communities).
class CrossDistanceMatrix {
 public:
  CrossDistanceMatrix() = default;

  static CrossDistanceMatrix Compute(
      std::vector<std::string> row_keys,
      std::span<const IndexedDistribution> rows,
      std::vector<std::string> col_keys,
      std::span<const IndexedDistribution> cols, int workers);

  std::size_t rows() const { return row_keys_.size(); }
  std::size_t cols() const { return col_keys_.size(); }
  const std::vector<std::string>& row_keys() const { return row_keys_; }
  const std::vector<std::string>& col_keys() const { return col_keys_; }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * col_keys_.size() + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * col_keys_.size(), col_keys_.size()};
  }
  std::vector<double> column(std::size_t c) const;

 private:
  std::vector<std::string> row_keys_;
  std::vector<std::string> col_keys_;
  std::vector<double> values_;
};

// The maximal d-convergent set around a subject.
struct AnonymityResult {
  std::string subject;
  double d = 0.0;
  std::vector<std::string> members;  // in matrix order, subject included
  std::size_t k = 0;
};

// Indices j with dist(subject, j) <= d, ascending; always contains subject.
std::vector<std::size_t> ConvergentIndices(const DistanceMatrix& m,
                                           std::size_t subject, double d);

absl::StatusOr<AnonymityResult> ConvergentSubset(const DistanceMatrix& m,
                                                 std::string_view subject,
                                                 double d);

// True iff the subject has a d-convergent subset of at least k members.
absl::StatusOr<bool> IsKdAnonymous(const DistanceMatrix& m,
                                   std::string_view subject, std::size_t k,
                                   double d);

// Inclusive: distance <= c.
inline bool CMatches(double distance, double c) { return distance <= c; }

// Checks that every member of `subject_set` lies within c + d of the target,
// given that `subject_set` is d-convergent for `star` and `star` c-matches
// the target. `to_target[i]` is the distance from collection member i to the
// target. Fails if the preconditions do not hold.
absl::StatusOr<bool> LemmaBoundCheck(const DistanceMatrix& within,
                                     std::span<const double> to_target,
                                     std::span<const std::size_t> subject_set,
                                     std::size_t star, double c, double d,
                                     double tolerance = kMetricTolerance);

struct ChoiceScore {
  // 1 - dist(chosen)/sum(dist): the similarity-only adversary's score. Only a
  // probability when there are two candidates.
  double score = 0.0;
  // score / (n - 1), which sums to 1 over the candidates.
  double normalized = 0.0;
};

// `distances[i]` is the distance from candidate i to the target.
absl::StatusOr<ChoiceScore> ChoiceLikelihood(std::span<const double> distances,
                                             std::size_t chosen);

// Same, reading candidate distances from a column of a cross matrix whose
// columns are targets.
absl::StatusOr<ChoiceScore> ChoiceLikelihood(
    const CrossDistanceMatrix& cross, std::span<const std::size_t> candidates,
    std::size_t target_col, std::size_t chosen);

// Upper limit t on linking a (k,d)-anonymous entity that c-matches its
// counterpart: t = 1 - c / (c + (k-1)(c+d)).
struct MatchingBound {
  double c = 0.0;
  double d = 0.0;
  std::size_t k = 1;
  double t = 0.0;
};

absl::StatusOr<MatchingBound> ComputeMatchingBound(double c, double d,
                                                   std::size_t k);
// The sigma for which such a pair is sigma-unlinkable; equal to t.
absl::StatusOr<double> UnlinkabilitySigma(double c, double d, std::size_t k);

// Binary matrix file: an 8-byte little-endian header length, a UTF-8 JSON
// header (format, version, keys, ordering, dtype, count, checksum), then the
// strict upper triangle as little-endian float32 values in row-major order.
// The checksum is FNV-1a 64 over the payload bytes.
absl::Status WriteDistanceMatrix(const DistanceMatrix& m, std::ostream& out);
absl::StatusOr<DistanceMatrix> ReadDistanceMatrix(std::istream& in);

}  // namespace linkrisk

#endif  // LINKRISK_ANONYMITY_H_
