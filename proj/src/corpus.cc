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

#include "linkrisk/corpus.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "linkrisk/parallel.h"
#include "fnv_internal.h"
#include "markdown_internal.h"

namespace linkrisk {
namespace {

using Json = nlohmann::json;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

absl::StatusOr<RawComment> ParseRecord(std::string_view line) {
  Json record = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded()) return absl::InvalidArgumentError("malformed JSON");
  if (!record.is_object()) {
    return absl::InvalidArgumentError("record is not a JSON object");
  }
  RawComment comment;
  for (const auto& [field, target] :
       {std::pair{"author", &comment.author_id},
        std::pair{"community", &comment.community_id},
        std::pair{"body", &comment.body}}) {
    const auto it = record.find(field);
    if (it == record.end() || !it->is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing or non-string field '", field, "'"));
    }
    *target = it->get<std::string>();
  }
  if (comment.author_id.empty() || comment.community_id.empty()) {
    return absl::InvalidArgumentError("empty author or community");
  }
  if (const auto it = record.find("created_at");
      it != record.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      return absl::InvalidArgumentError("created_at is not an integer");
    }
    comment.created_at = it->get<std::int64_t>();
  }
  return comment;
}

// Combining diacritical mark blocks. Other nonspacing marks (e.g. Indic vowel
// signs) carry letters, not decoration, and are kept.
bool IsCombiningDiacritic(char32_t c) {
  return (c >= 0x0300 && c <= 0x036F) || (c >= 0x1AB0 && c <= 0x1AFF) ||
         (c >= 0x1DC0 && c <= 0x1DFF) || (c >= 0x20D0 && c <= 0x20FF) ||
         (c >= 0xFE20 && c <= 0xFE2F);
}

bool IsSeparator(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) ||
         u_iscntrl(static_cast<UChar32>(c));
}

bool IsApostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

// Punctuation in the Unicode sense plus ASCII symbols, which only appear as
// markup or sentence decoration in comment text.
bool IsPunctuation(char32_t c) {
  if (c < 0x80) {
    return c > 0x20 && c != 0x7f && !((c >= U'0' && c <= U'9') ||
                                      (c >= U'a' && c <= U'z') ||
                                      (c >= U'A' && c <= U'Z'));
  }
  return u_ispunct(static_cast<UChar32>(c));
}

bool IsAsciiAlnum(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
         (c >= U'A' && c <= U'Z');
}

bool IsSchemeChar(char32_t c) {
  return IsAsciiAlnum(c) || c == U'+' || c == U'.' || c == U'-';
}

bool IsHostChar(char32_t c) {
  return c == U'.' || c == U'-' || IsAsciiAlnum(c) ||
         (c >= 0x80 && u_isalnum(static_cast<UChar32>(c)));
}

std::string ToUtf8(const std::u32string& s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else if (c < 0x800) {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
      out += static_cast<char>(0xE0 | (c >> 12));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (c >> 18));
      out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }
  return out;
}

std::string LowercaseUtf8(std::string_view text) {
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  us.toLower(icu::Locale::getRoot());
  std::string out;
  us.toUTF8String(out);
  return out;
}

// Decodes UTF-8 (invalid sequences become U+FFFD). With `compose`, applies
// canonical composition and drops the combining marks left over.
std::u32string DecodeText(std::string_view text, bool compose) {
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (compose) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_SUCCESS(status)) {
      icu::UnicodeString composed = nfc->normalize(us, status);
      if (U_SUCCESS(status)) us = std::move(composed);
    }
  }
  std::u32string out;
  out.reserve(static_cast<std::size_t>(us.length()));
  for (int32_t i = 0; i < us.length(); i = us.moveIndex32(i, 1)) {
    const auto c = static_cast<char32_t>(us.char32At(i));
    if (compose && IsCombiningDiacritic(c)) continue;
    out += c;
  }
  return out;
}

struct UrlMatch {
  std::size_t start = 0;
  std::u32string host;
};

// Finds the first scheme-prefixed or "www."-prefixed URL in a whitespace
// delimited piece and extracts its lowercased hostname.
std::optional<UrlMatch> FindUrl(const std::u32string& piece) {
  std::size_t start = std::u32string::npos;
  std::size_t host_begin = 0;
  if (const std::size_t sep = piece.find(U"://");
      sep != std::u32string::npos && sep > 0) {
    std::size_t s = sep;
    while (s > 0 && IsSchemeChar(piece[s - 1])) --s;
    while (s < sep && !(piece[s] >= U'a' && piece[s] <= U'z') &&
           !(piece[s] >= U'A' && piece[s] <= U'Z')) {
      ++s;
    }
    if (s < sep) {
      start = s;
      host_begin = sep + 3;
    }
  }
  for (std::size_t pos = piece.find(U"www."); pos != std::u32string::npos;
       pos = piece.find(U"www.", pos + 1)) {
    if (pos >= start) break;
    if (pos == 0 || !IsAsciiAlnum(piece[pos - 1])) {
      start = pos;
      host_begin = pos;
      break;
    }
  }
  if (start == std::u32string::npos) return std::nullopt;

  std::size_t end = host_begin;
  while (end < piece.size() && piece[end] != U'/' && piece[end] != U'?' &&
         piece[end] != U'#') {
    ++end;
  }
  std::u32string authority = piece.substr(host_begin, end - host_begin);
  if (const auto at = authority.rfind(U'@'); at != std::u32string::npos) {
    authority.erase(0, at + 1);
  }
  std::size_t host_len = 0;
  while (host_len < authority.size() && IsHostChar(authority[host_len])) {
    ++host_len;
  }
  std::u32string host = authority.substr(0, host_len);
  while (!host.empty() && (host.back() == U'.' || host.back() == U'-')) {
    host.pop_back();
  }
  std::size_t lead = 0;
  while (lead < host.size() && (host[lead] == U'.' || host[lead] == U'-')) {
    ++lead;
  }
  host.erase(0, lead);
  for (char32_t& c : host) {
    c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  }
  return UrlMatch{start, std::move(host)};
}

// label(.label)+ where the last label is at least two letters. Such tokens
// are the hostnames the URL step emits and keep their dots.
bool IsBareHost(const std::u32string& s) {
  if (s.empty() || s.front() == U'.' || s.back() == U'.') return false;
  std::size_t labels = 1;
  std::size_t last_dot = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (c == U'.') {
      if (i > 0 && s[i - 1] == U'.') return false;
      ++labels;
      last_dot = i;
    } else if (!(c == U'-' || IsAsciiAlnum(c) ||
                 (c >= 0x80 && u_isalnum(static_cast<UChar32>(c))))) {
      return false;
    }
  }
  if (labels < 2) return false;
  const std::u32string tld = s.substr(last_dot + 1);
  if (tld.size() < 2) return false;
  for (char32_t c : tld) {
    if (!u_isalpha(static_cast<UChar32>(c))) return false;
  }
  return true;
}

void CollapseRepeats(std::u32string& token, int max_repeat) {
  std::u32string out;
  out.reserve(token.size());
  int run = 0;
  for (std::size_t i = 0; i < token.size(); ++i) {
    run = (i > 0 && token[i] == token[i - 1]) ? run + 1 : 1;
    if (run <= max_repeat) out += token[i];
  }
  token = std::move(out);
}

}  // namespace

absl::StatusOr<IngestResult> IngestJsonl(std::istream& in, bool lenient) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    absl::StatusOr<RawComment> comment = ParseRecord(line);
    if (!comment.ok()) {
      if (!lenient) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": ", comment.status().message()));
      }
      result.errors.push_back(
          {line_no, std::string(comment.status().message())});
      continue;
    }
    result.comments.push_back(*std::move(comment));
  }
  return result;
}

std::set<std::string> ParseWordList(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view entry = Trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    words.emplace(entry);
  }
  return words;
}

absl::StatusOr<std::set<std::string>> LoadWordList(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ParseWordList(in);
}

std::string WordListHash(const std::set<std::string>& words) {
  Fnv1a64 hash;
  for (const std::string& w : words) {
    hash.Update(w);
    hash.Update("\n");
  }
  return hash.hex();
}

absl::Status NormalizationConfig::Validate() const {
  if (max_char_repeat < 1) {
    return absl::InvalidArgumentError("max_char_repeat must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<Normalizer> Normalizer::Create(NormalizationConfig config) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  return Normalizer(std::move(config));
}

Normalizer::Normalizer(NormalizationConfig config) : config_(std::move(config)) {
  const NormalizationSteps& steps = config_.steps;
  for (const std::string& smiley : config_.smilies) {
    const std::string lowered =
        steps.lowercase ? LowercaseUtf8(smiley) : smiley;
    smilies_.insert(DecodeText(lowered, steps.strip_diacritics));
    smilies_utf8_.insert(lowered);
  }
  // Stopwords match both verbatim and in the form the pipeline would turn
  // them into (e.g. "don't" -> "dont").
  Normalizer plain(*this);
  plain.stopwords_.clear();
  for (const std::string& word : config_.stopwords) {
    stopwords_.insert(word);
    stopwords_.insert(steps.lowercase ? LowercaseUtf8(word) : word);
    const std::vector<std::string> forms = plain.Tokenize(word);
    if (forms.size() == 1) stopwords_.insert(forms.front());
  }
}

std::vector<std::string> Normalizer::Tokenize(std::string_view body) const {
  const NormalizationSteps& steps = config_.steps;
  std::string text = steps.lowercase ? LowercaseUtf8(body) : std::string(body);
  if (steps.strip_markdown) text = StripMarkdownImpl(text, &smilies_utf8_);
  const std::u32string chars = DecodeText(text, steps.strip_diacritics);

  std::vector<std::u32string> tokens;
  auto emit_plain = [&](const std::u32string& piece) {
    if (!steps.strip_punctuation) {
      if (!piece.empty()) tokens.push_back(piece);
      return;
    }
    std::u32string current;
    for (char32_t c : piece) {
      if (IsApostrophe(c)) continue;
      if (IsPunctuation(c)) {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
      } else {
        current += c;
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
  };

  std::size_t i = 0;
  while (i < chars.size()) {
    while (i < chars.size() && IsSeparator(chars[i])) ++i;
    std::size_t end = i;
    while (end < chars.size() && !IsSeparator(chars[end])) ++end;
    if (end == i) break;
    std::u32string piece = chars.substr(i, end - i);
    i = end;

    if (steps.strip_punctuation && smilies_.contains(piece)) {
      tokens.push_back(std::move(piece));
      continue;
    }
    if (steps.replace_urls) {
      if (std::optional<UrlMatch> url = FindUrl(piece)) {
        emit_plain(piece.substr(0, url->start));
        if (!url->host.empty()) tokens.push_back(std::move(url->host));
        continue;
      }
    }
    if (steps.strip_punctuation) {
      std::size_t b = 0;
      std::size_t e = piece.size();
      while (b < e && IsPunctuation(piece[b])) ++b;
      while (e > b && IsPunctuation(piece[e - 1])) --e;
      std::u32string core = piece.substr(b, e - b);
      if (IsBareHost(core)) {
        tokens.push_back(std::move(core));
        continue;
      }
    }
    emit_plain(piece);
  }

  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::u32string& token : tokens) {
    if (steps.collapse_repeats) CollapseRepeats(token, config_.max_char_repeat);
    if (token.empty()) continue;
    std::string utf8 = ToUtf8(token);
    if (stopwords_.contains(utf8)) continue;
    out.push_back(std::move(utf8));
  }
  return out;
}

std::vector<std::string> Normalize(std::string_view body,
                                   const NormalizationConfig& config) {
  absl::StatusOr<Normalizer> normalizer = Normalizer::Create(config);
  if (!normalizer.ok()) return {};
  return normalizer->Tokenize(body);
}

std::map<ProfileKey, TokenStream> AggregateProfiles(
    const std::vector<RawComment>& comments, const Normalizer& normalizer,
    int workers) {
  std::vector<std::vector<std::string>> per_comment(comments.size());
  ParallelFor(comments.size(), workers, [&](std::size_t i) {
    per_comment[i] = normalizer.Tokenize(comments[i].body);
  });
  std::map<ProfileKey, TokenStream> profiles;
  for (std::size_t i = 0; i < comments.size(); ++i) {
    ProfileKey key{comments[i].author_id, comments[i].community_id};
    TokenStream& stream = profiles[key];
    if (stream.comment_count == 0) stream.profile_key = std::move(key);
    ++stream.comment_count;
    for (std::string& token : per_comment[i]) {
      stream.tokens.push_back(std::move(token));
    }
  }
  return profiles;
}

std::map<ProfileKey, TokenStream> FilterInteresting(
    const std::map<ProfileKey, TokenStream>& profiles,
    std::int64_t min_comments, std::int64_t min_profiles,
    const std::set<std::string>& excluded) {
  std::map<std::string, std::int64_t> qualifying;
  for (const auto& [key, stream] : profiles) {
    if (excluded.contains(key.community_id)) continue;
    if (stream.comment_count >= min_comments) ++qualifying[key.community_id];
  }
  std::map<ProfileKey, TokenStream> kept;
  for (const auto& [key, stream] : profiles) {
    if (excluded.contains(key.community_id)) continue;
    if (stream.comment_count < min_comments) continue;
    if (qualifying[key.community_id] < min_profiles) continue;
    kept.emplace(key, stream);
  }
  return kept;
}


absl::Status WriteCommentsJsonl(std::span<const RawComment> comments,
                                std::ostream& out) {
  for (const RawComment& c : comments) {
    Json record = {{"author", c.author_id},
                   {"community", c.community_id},
                   {"body", c.body}};
    if (c.created_at) record["created_at"] = *c.created_at;
    out << record.dump() << "\n";
  }
  if (!out) return absl::InternalError("write failed");
  return absl::OkStatus();
}

absl::Status WriteTokenStreams(const std::map<ProfileKey, TokenStream>& streams,
                               std::ostream& out) {
  for (const auto& [key, stream] : streams) {
    const Json record = {{"author", key.author_id},
                         {"community", key.community_id},
                         {"comments", stream.comment_count},
                         {"tokens", stream.tokens}};
    out << record.dump() << "\n";
  }
  if (!out) return absl::InternalError("write failed");
  return absl::OkStatus();
}

absl::StatusOr<std::map<ProfileKey, TokenStream>> ReadTokenStreams(
    std::istream& in) {
  std::map<ProfileKey, TokenStream> streams;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const Json record = Json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object() ||
        !record.contains("author") || !record["author"].is_string() ||
        !record.contains("community") || !record["community"].is_string() ||
        !record.contains("comments") || !record["comments"].is_number_integer() ||
        !record.contains("tokens") || !record["tokens"].is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("token stream line ", line_no, ": malformed record"));
    }
    TokenStream stream;
    stream.profile_key = {record["author"].get<std::string>(),
                          record["community"].get<std::string>()};
    stream.comment_count = record["comments"].get<std::int64_t>();
    for (const Json& token : record["tokens"]) {
      if (!token.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("token stream line ", line_no, ": non-string token"));
      }
      stream.tokens.push_back(token.get<std::string>());
    }
    ProfileKey key = stream.profile_key;
    if (!streams.emplace(std::move(key), std::move(stream)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("token stream line ", line_no, ": duplicate profile"));
    }
  }
  return streams;
}

}  // namespace linkrisk
