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

#ifndef LINKRISK_CORPUS_H_
#define LINKRISK_CORPUS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace linkrisk {

// One comment as ingested from a corpus file.
struct RawComment {
  std::string author_id;
  std::string community_id;
  std::string body;
  std::optional<std::int64_t> created_at;

  bool operator==(const RawComment&) const = default;
};

// A profile is one author inside one community.
struct ProfileKey {
  std::string author_id;
  std::string community_id;

  auto operator<=>(const ProfileKey&) const = default;
  bool operator==(const ProfileKey&) const = default;
};

struct IngestError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  std::vector<RawComment> comments;
  std::vector<IngestError> errors;
};

// Parses JSON Lines with fields `author`, `community`, `body` and optional
// integer `created_at`. Blank lines are ignored. In strict mode the first bad
// record fails the whole stream with its line number; in lenient mode bad
// records are skipped and reported in IngestResult::errors.
absl::StatusOr<IngestResult> IngestJsonl(std::istream& in, bool lenient);

// Reads a word list: one entry per line, surrounding whitespace trimmed,
// blank lines and lines starting with '#' ignored.
absl::StatusOr<std::set<std::string>> LoadWordList(const std::string& path);
std::set<std::string> ParseWordList(std::istream& in);

// Stable 64-bit FNV-1a hash of a word list (entries in sorted order, each
// terminated by '\n'), rendered as 16 hex digits.
std::string WordListHash(const std::set<std::string>& words);

// The six text normalization steps, in application order.
struct NormalizationSteps {
  bool lowercase = true;
  bool strip_markdown = true;
  bool strip_diacritics = true;
  bool replace_urls = true;
  bool strip_punctuation = true;
  bool collapse_repeats = true;
};

struct NormalizationConfig {
  std::set<std::string> stopwords;
  std::set<std::string> smilies;
  int max_char_repeat = 3;
  NormalizationSteps steps;

  absl::Status Validate() const;
};

// A normalized token stream for one profile.
struct TokenStream {
  ProfileKey profile_key;
  std::vector<std::string> tokens;
  std::int64_t comment_count = 0;
};

// Precompiled normalization pipeline. Immutable after construction and safe
// to share between threads.
class Normalizer {
 public:
  static absl::StatusOr<Normalizer> Create(NormalizationConfig config);

  // Tokens of one comment body, in source order.
  std::vector<std::string> Tokenize(std::string_view body) const;

  const NormalizationConfig& config() const { return config_; }

 private:
  explicit Normalizer(NormalizationConfig config);

  NormalizationConfig config_;
  // Lookup sets with entries passed through the same case/diacritic steps as
  // comment text.
  std::unordered_set<std::string> stopwords_;
  std::unordered_set<std::u32string> smilies_;
  std::unordered_set<std::string> smilies_utf8_;
};

// Convenience wrapper: builds a Normalizer and tokenizes one body. Invalid
// configurations yield an empty token list.
std::vector<std::string> Normalize(std::string_view body,
                                   const NormalizationConfig& config);

// Markdown layout removal used by the normalizer: layout modifiers (emphasis,
// headers, lists, tables, link syntax) are unwrapped; embedding modifiers
// (inline and block code, quotes) are deleted with their content.
std::string StripMarkdown(std::string_view text);

// Normalizes every comment and folds the results into one stream per
// (author, community). Tokens of a profile appear in input comment order,
// independent of the worker count.
std::map<ProfileKey, TokenStream> AggregateProfiles(
    const std::vector<RawComment>& comments, const Normalizer& normalizer,
    int workers);

// Keeps profiles with at least `min_comments` comments whose community has at
// least `min_profiles` such profiles. Communities listed in `excluded` are
// dropped first. Single pass: qualifying profiles are counted once.
std::map<ProfileKey, TokenStream> FilterInteresting(
    const std::map<ProfileKey, TokenStream>& profiles,
    std::int64_t min_comments, std::int64_t min_profiles,
    const std::set<std::string>& excluded = {});

// Writes comments as JSON Lines in the ingest format.
absl::Status WriteCommentsJsonl(std::span<const RawComment> comments,
                                std::ostream& out);

// Token streams as JSON Lines:
//   {"author":A,"community":C,"comments":N,"tokens":[...]}
absl::Status WriteTokenStreams(const std::map<ProfileKey, TokenStream>& streams,
                               std::ostream& out);
absl::StatusOr<std::map<ProfileKey, TokenStream>> ReadTokenStreams(
    std::istream& in);

}  // namespace linkrisk

#endif  // LINKRISK_CORPUS_H_
