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

#ifndef LINKRISK_SYNTH_H_
#define LINKRISK_SYNTH_H_

// Synthetic two-community corpus with known cross-community links.

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "linkrisk/corpus.h"
#include "linkrisk/eval.h"

namespace linkrisk {

// Each user writes in both communities. A token is drawn from the user's
// personal vocabulary with probability w_u and from the community's topic
// mixture otherwise. w_u is uniform on
// [idiosyncrasy * (1 - spread), idiosyncrasy * (1 + spread)], clipped to
// [0, 1], so users differ in how recognizable they are.
struct SynthParams {
  int users = 500;
  int topics = 20;
  int comments_per_user = 40;  // per community
  int tokens_per_comment = 12;
  double idiosyncrasy = 0.3;
  double spread = 1.0;
  int words_per_topic = 60;
  int personal_words = 25;
  int personal_pool = 3000;
  double zipf_exponent = 1.0;
  std::uint64_t seed = 42;
  std::string community_a = "alpha";
  std::string community_b = "beta";

  absl::Status Validate() const;
};

struct SynthCorpus {
  std::vector<RawComment> community_a;
  std::vector<RawComment> community_b;
  std::vector<GroundTruthLink> links;
};

absl::StatusOr<SynthCorpus> SynthesizeCorpus(const SynthParams& params);

// The i-th pseudo-word: at least three consonant-vowel syllables. Distinct
// indices give distinct words.
std::string PseudoWord(std::uint64_t index);

}  // namespace linkrisk

#endif  // LINKRISK_SYNTH_H_
