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

#include "linkrisk/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "linkrisk/metric.h"

namespace linkrisk {
namespace {

absl::StatusOr<std::vector<Distribution>> ToDistributions(
    const std::map<std::string, UnigramModel>& models,
    std::vector<std::string>& keys) {
  std::vector<Distribution> dists;
  dists.reserve(models.size());
  for (const auto& [key, model] : models) {
    absl::StatusOr<Distribution> dist = ToDistribution(model);
    if (!dist.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("profile '", key, "': ", dist.status().message()));
    }
    keys.push_back(key);
    dists.push_back(*std::move(dist));
  }
  return dists;
}

// Average 1-based ranks, ties sharing the mean of their positions.
std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

absl::Status Finish(std::ostream& out) {
  if (!out) return absl::InternalError("write failed");
  return absl::OkStatus();
}

}  // namespace

std::string FormatReal(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

absl::StatusOr<std::vector<RankedCandidate>> RankCandidates(
    const Distribution& source,
    const std::map<std::string, Distribution>& targets) {
  if (source.empty()) return absl::InvalidArgumentError("empty source model");
  std::vector<RankedCandidate> ranked;
  ranked.reserve(targets.size());
  for (const auto& [key, dist] : targets) {
    ranked.push_back({key, JsDistance(source, dist)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.distance < b.distance;
                   });
  return ranked;
}

absl::StatusOr<LinkageExperiment> LinkageExperiment::Build(
    const std::map<std::string, UnigramModel>& community_a,
    const std::map<std::string, UnigramModel>& community_b, int workers) {
  std::vector<std::string> keys_a;
  std::vector<std::string> keys_b;
  absl::StatusOr<std::vector<Distribution>> dists_a =
      ToDistributions(community_a, keys_a);
  if (!dists_a.ok()) return dists_a.status();
  absl::StatusOr<std::vector<Distribution>> dists_b =
      ToDistributions(community_b, keys_b);
  if (!dists_b.ok()) return dists_b.status();

  std::vector<const Distribution*> all;
  for (const Distribution& d : *dists_a) all.push_back(&d);
  for (const Distribution& d : *dists_b) all.push_back(&d);
  std::vector<IndexedDistribution> indexed = IndexDistributions(all);
  const std::span<const IndexedDistribution> indexed_a(indexed.data(),
                                                       dists_a->size());
  const std::span<const IndexedDistribution> indexed_b(
      indexed.data() + dists_a->size(), dists_b->size());

  absl::StatusOr<DistanceMatrix> within_a =
      DistanceMatrix::Compute(keys_a, indexed_a, workers);
  if (!within_a.ok()) return within_a.status();
  absl::StatusOr<DistanceMatrix> within_b =
      DistanceMatrix::Compute(keys_b, indexed_b, workers);
  if (!within_b.ok()) return within_b.status();
  CrossDistanceMatrix cross = CrossDistanceMatrix::Compute(
      keys_a, indexed_a, keys_b, indexed_b, workers);
  return FromMatrices(*std::move(within_a), *std::move(within_b),
                      std::move(cross));
}

absl::StatusOr<LinkageExperiment> LinkageExperiment::FromMatrices(
    DistanceMatrix within_a, DistanceMatrix within_b,
    CrossDistanceMatrix cross) {
  if (within_a.keys() != cross.row_keys() ||
      within_b.keys() != cross.col_keys()) {
    return absl::InvalidArgumentError("matrix keys disagree");
  }
  LinkageExperiment experiment;
  experiment.within_a_ = std::move(within_a);
  experiment.within_b_ = std::move(within_b);
  experiment.cross_ = std::move(cross);
  return experiment;
}

std::vector<GroundTruthLink> LinkageExperiment::SharedAuthorLinks() const {
  std::vector<GroundTruthLink> links;
  for (const std::string& key : within_a_.keys()) {
    if (within_b_.Index(key).ok()) links.push_back({key, key, true});
  }
  return links;
}

absl::StatusOr<std::pair<std::size_t, std::size_t>> LinkageExperiment::Locate(
    const GroundTruthLink& link) const {
  absl::StatusOr<std::size_t> s = within_a_.Index(link.source);
  if (!s.ok()) return s.status();
  absl::StatusOr<std::size_t> t = within_b_.Index(link.target);
  if (!t.ok()) return t.status();
  return std::pair{*s, *t};
}

absl::StatusOr<std::size_t> LinkageExperiment::RankOf(
    const GroundTruthLink& link) const {
  absl::StatusOr<std::pair<std::size_t, std::size_t>> at = Locate(link);
  if (!at.ok()) return at.status();
  const auto [s, t] = *at;
  const std::span<const double> row = cross_.row(s);
  const std::vector<std::string>& keys = cross_.col_keys();
  std::size_t ahead = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] < row[t] || (row[j] == row[t] && keys[j] < keys[t])) ++ahead;
  }
  return ahead + 1;
}

absl::StatusOr<std::vector<RankedCandidate>> LinkageExperiment::Rank(
    const std::string& source) const {
  absl::StatusOr<std::size_t> s = within_a_.Index(source);
  if (!s.ok()) return s.status();
  const std::span<const double> row = cross_.row(*s);
  std::vector<RankedCandidate> ranked;
  ranked.reserve(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    ranked.push_back({cross_.col_keys()[j], row[j]});
  }
  // Column keys are sorted, so a stable sort breaks ties by key.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.distance < b.distance;
                   });
  return ranked;
}

absl::StatusOr<double> PrecisionAtK(const LinkageExperiment& experiment,
                                    std::span<const GroundTruthLink> links,
                                    std::size_t k) {
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (links.empty()) return absl::InvalidArgumentError("no ground truth links");
  std::size_t hits = 0;
  for (const GroundTruthLink& link : links) {
    absl::StatusOr<std::size_t> rank = experiment.RankOf(link);
    if (!rank.ok()) return rank.status();
    if (*rank <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(links.size());
}

absl::StatusOr<std::vector<LinkAnonymity>> LinkAnonymities(
    const LinkageExperiment& experiment, std::span<const GroundTruthLink> links,
    SubsetSide side) {
  std::vector<LinkAnonymity> rows;
  rows.reserve(links.size());
  for (const GroundTruthLink& link : links) {
    absl::StatusOr<std::size_t> s = experiment.within_a().Index(link.source);
    if (!s.ok()) return s.status();
    absl::StatusOr<std::size_t> t = experiment.within_b().Index(link.target);
    if (!t.ok()) return t.status();
    absl::StatusOr<std::size_t> rank = experiment.RankOf(link);
    if (!rank.ok()) return rank.status();
    LinkAnonymity row;
    row.link = link;
    row.matching_distance = experiment.cross()(*s, *t);
    row.subset_size =
        side == SubsetSide::kTarget
            ? ConvergentIndices(experiment.within_b(), *t, row.matching_distance)
                  .size()
            : ConvergentIndices(experiment.within_a(), *s, row.matching_distance)
                  .size();
    row.rank = *rank;
    rows.push_back(std::move(row));
  }
  return rows;
}

PrecisionReport BinPrecision(std::span<const LinkAnonymity> rows, std::size_t k,
                             std::size_t bin_width) {
  std::map<std::size_t, PrecisionBin> bins;
  for (const LinkAnonymity& row : rows) {
    const std::size_t b = (std::max<std::size_t>(row.subset_size, 1) - 1) / bin_width;
    PrecisionBin& bin = bins[b];
    bin.lo = b * bin_width + 1;
    bin.hi = (b + 1) * bin_width;
    ++bin.pairs;
    if (row.rank <= k) ++bin.hits;
  }
  PrecisionReport report;
  report.k = k;
  for (auto& [b, bin] : bins) {
    bin.precision = static_cast<double>(bin.hits) / static_cast<double>(bin.pairs);
    report.bins.push_back(bin);
  }
  return report;
}

absl::StatusOr<PrecisionReport> AnonVsPrecision(
    const LinkageExperiment& experiment, std::span<const GroundTruthLink> links,
    std::size_t k, SubsetSide side, std::size_t bin_width) {
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (bin_width < 1) return absl::InvalidArgumentError("bin width must be positive");
  if (links.empty()) return absl::InvalidArgumentError("no ground truth links");
  absl::StatusOr<std::vector<LinkAnonymity>> rows =
      LinkAnonymities(experiment, links, side);
  if (!rows.ok()) return rows.status();
  return BinPrecision(*rows, k, bin_width);
}

absl::StatusOr<Scatter> MatchedVsAverageScatter(
    const LinkageExperiment& experiment,
    std::span<const GroundTruthLink> links) {
  const CrossDistanceMatrix& cross = experiment.cross();
  if (cross.cols() < 2) {
    return absl::FailedPreconditionError(
        "need a non-matching profile in the target community");
  }
  Scatter scatter;
  std::size_t below = 0;
  for (const GroundTruthLink& link : links) {
    absl::StatusOr<std::size_t> s = experiment.within_a().Index(link.source);
    if (!s.ok()) return s.status();
    absl::StatusOr<std::size_t> t = experiment.within_b().Index(link.target);
    if (!t.ok()) return t.status();
    double sum = 0.0;
    const std::span<const double> row = cross.row(*s);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j != *t) sum += row[j];
    }
    ScatterRow out{link, sum / static_cast<double>(row.size() - 1), row[*t]};
    if (out.matching < out.average_nonmatching) ++below;
    scatter.rows.push_back(std::move(out));
  }
  if (!links.empty()) {
    scatter.fraction_below_diagonal =
        static_cast<double>(below) / static_cast<double>(links.size());
  }
  return scatter;
}

absl::StatusOr<DistanceStats> WithinStats(const DistanceMatrix& m) {
  if (m.size() < 2) return absl::InvalidArgumentError("need at least 2 profiles");
  const std::vector<double>& values = m.packed();
  DistanceStats stats;
  stats.pairs = values.size();
  stats.min = *std::min_element(values.begin(), values.end());
  stats.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  return stats;
}

absl::StatusOr<DistanceStats> AcrossStats(const CrossDistanceMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0 || m.rows() + m.cols() < 2) {
    return absl::InvalidArgumentError("need at least 2 profiles");
  }
  DistanceStats stats;
  stats.pairs = m.rows() * m.cols();
  stats.min = m(0, 0);
  stats.max = m(0, 0);
  double sum = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double v : m.row(r)) {
      stats.min = std::min(stats.min, v);
      stats.max = std::max(stats.max, v);
      sum += v;
    }
  }
  stats.mean = sum / static_cast<double>(stats.pairs);
  return stats;
}

absl::StatusOr<double> SpearmanCorrelation(std::span<const double> x,
                                           std::span<const double> y) {
  if (x.size() != y.size()) return absl::InvalidArgumentError("length mismatch");
  if (x.size() < 2) return absl::InvalidArgumentError("need at least 2 points");
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return absl::InvalidArgumentError("constant series has no rank correlation");
  }
  return sxy / std::sqrt(sxx * syy);
}

absl::Status WritePrecisionCsv(
    const std::vector<std::pair<std::size_t, double>>& precision,
    std::size_t pairs, std::ostream& out) {
  out << "k,pairs,precision\n";
  for (const auto& [k, p] : precision) {
    out << k << ',' << pairs << ',' << FormatReal(p) << '\n';
  }
  return Finish(out);
}

absl::Status WriteAnonVsPrecisionCsv(std::span<const PrecisionReport> reports,
                                     std::ostream& out) {
  out << "k,bin_lo,bin_hi,pairs,hits,precision\n";
  for (const PrecisionReport& report : reports) {
    for (const PrecisionBin& bin : report.bins) {
      out << report.k << ',' << bin.lo << ',' << bin.hi << ',' << bin.pairs
          << ',' << bin.hits << ',' << FormatReal(bin.precision) << '\n';
    }
  }
  return Finish(out);
}

absl::Status WriteLinkAnonymityCsv(std::span<const LinkAnonymity> rows,
                                   std::ostream& out) {
  out << "source,target,matching_distance,subset_size,rank\n";
  for (const LinkAnonymity& row : rows) {
    out << row.link.source << ',' << row.link.target << ','
        << FormatReal(row.matching_distance) << ',' << row.subset_size << ','
        << row.rank << '\n';
  }
  return Finish(out);
}

absl::Status WriteScatterCsv(const Scatter& scatter, std::ostream& out) {
  out << "source,target,average_nonmatching_distance,matching_distance,"
         "below_diagonal\n";
  for (const ScatterRow& row : scatter.rows) {
    out << row.link.source << ',' << row.link.target << ','
        << FormatReal(row.average_nonmatching) << ',' << FormatReal(row.matching)
        << ',' << (row.matching < row.average_nonmatching ? 1 : 0) << '\n';
  }
  return Finish(out);
}

absl::Status WriteDistanceStatsCsv(
    const std::vector<std::pair<std::string, DistanceStats>>& stats,
    std::ostream& out) {
  out << "scope,pairs,min,max,mean\n";
  for (const auto& [scope, s] : stats) {
    out << scope << ',' << s.pairs << ',' << FormatReal(s.min) << ','
        << FormatReal(s.max) << ',' << FormatReal(s.mean) << '\n';
  }
  return Finish(out);
}

absl::Status WriteLinksCsv(std::span<const GroundTruthLink> links,
                           const std::string& community_a,
                           const std::string& community_b, std::ostream& out) {
  out << "source_community,source,target_community,target,same_user\n";
  for (const GroundTruthLink& link : links) {
    out << community_a << ',' << link.source << ',' << community_b << ','
        << link.target << ',' << (link.same_user ? 1 : 0) << '\n';
  }
  return Finish(out);
}

absl::StatusOr<std::vector<GroundTruthLink>> ReadLinksCsv(std::istream& in) {
  std::vector<GroundTruthLink> links;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const std::vector<std::string> fields = absl::StrSplit(line, ',');
    if (fields.size() != 5 || (fields[4] != "0" && fields[4] != "1")) {
      return absl::InvalidArgumentError(
          absl::StrCat("links line ", line_no, ": expected 5 fields"));
    }
    links.push_back({fields[1], fields[3], fields[4] == "1"});
  }
  return links;
}

}  // namespace linkrisk
