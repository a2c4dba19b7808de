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

#ifndef LINKRISK_EVAL_H_
#define LINKRISK_EVAL_H_

// Cross-community linkage experiments: ranking, precision@k, anonymous
// subset statistics and distance summaries.

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "linkrisk/anonymity.h"
#include "linkrisk/lm.h"

namespace linkrisk {

inline constexpr std::size_t kDefaultBinWidth = 10;

// A known correspondence between a profile in community A (source) and one in
// community B (target).
struct GroundTruthLink {
  std::string source;
  std::string target;
  bool same_user = true;

  bool operator==(const GroundTruthLink&) const = default;
};

struct RankedCandidate {
  std::string key;
  double distance = 0.0;
};

// Candidates by ascending distance to `source`, ties by key ascending.
absl::StatusOr<std::vector<RankedCandidate>> RankCandidates(
    const Distribution& source,
    const std::map<std::string, Distribution>& targets);

// Two communities of profiles, keyed by author, with the within-community
// matrices and the cross matrix (rows A, columns B).
class LinkageExperiment {
 public:
  static absl::StatusOr<LinkageExperiment> Build(
      const std::map<std::string, UnigramModel>& community_a,
      const std::map<std::string, UnigramModel>& community_b, int workers);

  // Assembles an experiment from precomputed matrices; keys must agree.
  static absl::StatusOr<LinkageExperiment> FromMatrices(
      DistanceMatrix within_a, DistanceMatrix within_b,
      CrossDistanceMatrix cross);

  const DistanceMatrix& within_a() const { return within_a_; }
  const DistanceMatrix& within_b() const { return within_b_; }
  const CrossDistanceMatrix& cross() const { return cross_; }

  // One link per author present in both communities, in author order.
  std::vector<GroundTruthLink> SharedAuthorLinks() const;

  // 1-based rank of `target` when the B profiles are ranked for `source`.
  absl::StatusOr<std::size_t> RankOf(const GroundTruthLink& link) const;

  // Ranked B candidates for one A profile.
  absl::StatusOr<std::vector<RankedCandidate>> Rank(
      const std::string& source) const;

 private:
  absl::StatusOr<std::pair<std::size_t, std::size_t>> Locate(
      const GroundTruthLink& link) const;

  DistanceMatrix within_a_;
  DistanceMatrix within_b_;
  CrossDistanceMatrix cross_;
};

// Fraction of links whose target ranks within the top k.
absl::StatusOr<double> PrecisionAtK(const LinkageExperiment& experiment,
                                    std::span<const GroundTruthLink> links,
                                    std::size_t k);

// Whose anonymous subset is measured for a link: the source profile among
// the A profiles, or the target profile among the B profiles.
enum class SubsetSide { kSource, kTarget };

struct PrecisionBin {
  std::size_t lo = 0;  // inclusive anonymous subset size range
  std::size_t hi = 0;
  std::size_t pairs = 0;
  std::size_t hits = 0;
  double precision = 0.0;
};

struct PrecisionReport {
  std::size_t k = 0;
  std::vector<PrecisionBin> bins;  // nonempty bins, ascending
};

struct LinkAnonymity {
  GroundTruthLink link;
  double matching_distance = 0.0;
  std::size_t subset_size = 0;
  std::size_t rank = 0;
};

// For each link: the anonymous subset size at d = matching distance and the
// rank of the target.
absl::StatusOr<std::vector<LinkAnonymity>> LinkAnonymities(
    const LinkageExperiment& experiment, std::span<const GroundTruthLink> links,
    SubsetSide side = SubsetSide::kSource);

// Precision@k per anonymous subset size bin ([1,w], [w+1,2w], ...).
absl::StatusOr<PrecisionReport> AnonVsPrecision(
    const LinkageExperiment& experiment, std::span<const GroundTruthLink> links,
    std::size_t k, SubsetSide side = SubsetSide::kSource,
    std::size_t bin_width = kDefaultBinWidth);
PrecisionReport BinPrecision(std::span<const LinkAnonymity> rows, std::size_t k,
                             std::size_t bin_width = kDefaultBinWidth);

struct ScatterRow {
  GroundTruthLink link;
  double average_nonmatching = 0.0;  // mean distance to other B profiles
  double matching = 0.0;
};

struct Scatter {
  std::vector<ScatterRow> rows;
  // Rows with matching < average_nonmatching.
  double fraction_below_diagonal = 0.0;
};

absl::StatusOr<Scatter> MatchedVsAverageScatter(
    const LinkageExperiment& experiment,
    std::span<const GroundTruthLink> links);

struct DistanceStats {
  std::size_t pairs = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Over unordered pairs of distinct profiles. Needs at least two profiles.
absl::StatusOr<DistanceStats> WithinStats(const DistanceMatrix& m);
// Over all (A, B) pairs. Needs at least two profiles in total and one on
// each side.
absl::StatusOr<DistanceStats> AcrossStats(const CrossDistanceMatrix& m);

// Spearman rank correlation with average ranks for ties. Fails on fewer than
// two points or a constant series.
absl::StatusOr<double> SpearmanCorrelation(std::span<const double> x,
                                           std::span<const double> y);

// CSV writers with fixed headers; reals are printed with 10 significant
// digits.
absl::Status WritePrecisionCsv(
    const std::vector<std::pair<std::size_t, double>>& precision,
    std::size_t pairs, std::ostream& out);
absl::Status WriteAnonVsPrecisionCsv(std::span<const PrecisionReport> reports,
                                     std::ostream& out);
absl::Status WriteLinkAnonymityCsv(std::span<const LinkAnonymity> rows,
                                   std::ostream& out);
absl::Status WriteScatterCsv(const Scatter& scatter, std::ostream& out);
absl::Status WriteDistanceStatsCsv(
    const std::vector<std::pair<std::string, DistanceStats>>& stats,
    std::ostream& out);
absl::Status WriteLinksCsv(std::span<const GroundTruthLink> links,
                           const std::string& community_a,
                           const std::string& community_b, std::ostream& out);
absl::StatusOr<std::vector<GroundTruthLink>> ReadLinksCsv(std::istream& in);

std::string FormatReal(double value);

}  // namespace linkrisk

#endif  // LINKRISK_EVAL_H_
