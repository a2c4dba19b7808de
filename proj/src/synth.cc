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

#include "linkrisk/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace linkrisk {
namespace {

constexpr std::string_view kConsonants = "bdfghklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::uint64_t kSyllables = 75;
constexpr std::uint64_t kThreeSyllableWords = kSyllables * kSyllables * kSyllables;

// Draws from mt19937_64 directly so streams match across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double Uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::uint64_t Below(std::uint64_t n) { return rng_() % n; }

  // Index i with probability weight[i] / total, from a cumulative table.
  std::size_t Pick(const std::vector<double>& cumulative) {
    const double u = Uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> Cumulative(const std::vector<double>& weights) {
  std::vector<double> out(weights.size());
  std::partial_sum(weights.begin(), weights.end(), out.begin());
  return out;
}

std::vector<double> ZipfWeights(int n, double exponent) {
  std::vector<double> w(n);
  for (int r = 0; r < n; ++r) w[r] = 1.0 / std::pow(r + 1.0, exponent);
  return w;
}

struct UserProfile {
  double weight = 0.0;
  std::vector<std::uint64_t> words;  // personal word indices, by rank
};

}  // namespace

std::string PseudoWord(std::uint64_t index) {
  if (index < kThreeSyllableWords) {
    index = (index * 7919 + 104729) % kThreeSyllableWords;
  }
  std::string word;
  int syllables = 0;
  while (index > 0 || syllables < 3) {
    const std::uint64_t s = index % kSyllables;
    index /= kSyllables;
    word.insert(word.begin(), kVowels[s % kVowels.size()]);
    word.insert(word.begin(), kConsonants[s / kVowels.size()]);
    ++syllables;
  }
  return word;
}

absl::Status SynthParams::Validate() const {
  if (users < 2) return absl::InvalidArgumentError("need at least 2 users");
  if (topics < 2) return absl::InvalidArgumentError("need at least 2 topics");
  if (comments_per_user < 1 || tokens_per_comment < 1) {
    return absl::InvalidArgumentError("comment sizes must be positive");
  }
  if (words_per_topic < 1 || personal_words < 1) {
    return absl::InvalidArgumentError("vocabulary sizes must be positive");
  }
  if (personal_pool < personal_words) {
    return absl::InvalidArgumentError("personal pool smaller than personal vocabulary");
  }
  if (!(idiosyncrasy >= 0.0 && idiosyncrasy <= 1.0)) {
    return absl::InvalidArgumentError("idiosyncrasy must lie in [0, 1]");
  }
  if (!(spread >= 0.0 && spread <= 1.0)) {
    return absl::InvalidArgumentError("spread must lie in [0, 1]");
  }
  if (!(zipf_exponent >= 0.0)) {
    return absl::InvalidArgumentError("zipf exponent must be nonnegative");
  }
  if (community_a.empty() || community_b.empty() || community_a == community_b) {
    return absl::InvalidArgumentError("need two distinct community names");
  }
  return absl::OkStatus();
}

absl::StatusOr<SynthCorpus> SynthesizeCorpus(const SynthParams& params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  Sampler sampler(params.seed);

  const std::vector<double> topic_word_cdf =
      Cumulative(ZipfWeights(params.words_per_topic, params.zipf_exponent));
  const std::vector<double> personal_cdf =
      Cumulative(ZipfWeights(params.personal_words, params.zipf_exponent));
  const std::uint64_t pool_offset =
      static_cast<std::uint64_t>(params.topics) * params.words_per_topic;

  // Dirichlet(1) topic mixture per community.
  std::vector<std::vector<double>> topic_cdf(2);
  for (auto& cdf : topic_cdf) {
    std::vector<double> w(params.topics);
    for (double& x : w) x = -std::log1p(-sampler.Uniform());
    cdf = Cumulative(w);
  }

  std::vector<UserProfile> users(params.users);
  std::vector<std::uint64_t> pool(params.personal_pool);
  for (UserProfile& user : users) {
    const double jitter = params.spread * (2.0 * sampler.Uniform() - 1.0);
    user.weight = std::clamp(params.idiosyncrasy * (1.0 + jitter), 0.0, 1.0);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < params.personal_words; ++i) {
      const std::size_t j = i + sampler.Below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      user.words.push_back(pool_offset + pool[i]);
    }
  }

  SynthCorpus corpus;
  const std::size_t width =
      std::max<std::size_t>(4, std::to_string(params.users - 1).size());
  for (int c = 0; c < 2; ++c) {
    const std::string& community = c == 0 ? params.community_a : params.community_b;
    std::vector<RawComment>& out = c == 0 ? corpus.community_a : corpus.community_b;
    for (int u = 0; u < params.users; ++u) {
      std::string author = std::to_string(u);
      author = absl::StrCat("u", std::string(width - author.size(), '0'), author);
      for (int m = 0; m < params.comments_per_user; ++m) {
        std::vector<std::string> tokens;
        tokens.reserve(params.tokens_per_comment);
        for (int t = 0; t < params.tokens_per_comment; ++t) {
          std::uint64_t word;
          if (sampler.Uniform() < users[u].weight) {
            word = users[u].words[sampler.Pick(personal_cdf)];
          } else {
            const std::size_t topic = sampler.Pick(topic_cdf[c]);
            word = topic * params.words_per_topic + sampler.Pick(topic_word_cdf);
          }
          tokens.push_back(PseudoWord(word));
        }
        out.push_back({author, community, absl::StrJoin(tokens, " "), std::nullopt});
      }
    }
  }
  for (int u = 0; u < params.users; ++u) {
    corpus.links.push_back(
        {corpus.community_a[u * params.comments_per_user].author_id,
         corpus.community_b[u * params.comments_per_user].author_id, true});
  }
  return corpus;
}

}  // namespace linkrisk
