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

#ifndef LINKRISK_LM_H_
#define LINKRISK_LM_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "linkrisk/corpus.h"

namespace linkrisk {

// Token counts of one profile, community or corpus.
struct UnigramModel {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  void Add(const std::string& token, std::int64_t n = 1);
  void Merge(const UnigramModel& other);

  static UnigramModel FromTokens(std::span<const std::string> tokens);

  bool operator==(const UnigramModel&) const = default;
};

// A finite probability distribution over tokens with no explicit zeros.
// Entries are kept sorted by token; every routine that sums over a support
// walks it in that order.
class Distribution {
 public:
  using Entry = std::pair<std::string, double>;

  Distribution() = default;

  // Accepts probabilities in (0, 1] summing to 1 within 1e-9.
  static absl::StatusOr<Distribution> FromProbabilities(
      const std::map<std::string, double>& probs);
  // Normalizes positive weights.
  static absl::StatusOr<Distribution> FromWeights(
      const std::map<std::string, double>& weights);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // 0 for tokens outside the support.
  double Prob(std::string_view token) const;

  bool operator==(const Distribution&) const = default;

 private:
  explicit Distribution(std::vector<Entry> entries)
      : entries_(std::move(entries)) {}

  std::vector<Entry> entries_;
};

// probs[w] = counts[w] / total. Fails on an empty model.
absl::StatusOr<Distribution> ToDistribution(const UnigramModel& model);

// The k most frequent tokens, count descending, ties by token ascending.
std::vector<std::pair<std::string, std::int64_t>> TopK(
    const UnigramModel& model, std::size_t k);

struct ModelSet {
  std::map<ProfileKey, UnigramModel> profiles;
  std::map<std::string, UnigramModel> communities;
  UnigramModel global;

  bool operator==(const ModelSet&) const = default;
};

// Per-profile models, community models as sums of their profiles, and the
// global model as the sum of the communities.
ModelSet BuildModels(const std::map<ProfileKey, TokenStream>& streams,
                     int workers = 1);

// Models of one community, keyed by author, in author order.
std::map<std::string, UnigramModel> CommunityProfiles(
    const ModelSet& models, const std::string& community);

// One JSON record per line:
//   {"kind":"profile","key":{"author":A,"community":C},"counts":{...}}
//   {"kind":"community","key":C,"counts":{...}}
//   {"kind":"global","key":null,"counts":{...}}
absl::Status WriteModelStore(const ModelSet& models, std::ostream& out);
absl::StatusOr<ModelSet> ReadModelStore(std::istream& in);

}  // namespace linkrisk

#endif  // LINKRISK_LM_H_
