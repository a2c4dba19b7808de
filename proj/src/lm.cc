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

#include "linkrisk/lm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "linkrisk/parallel.h"

namespace linkrisk {
namespace {

using Json = nlohmann::json;

Json CountsToJson(const UnigramModel& model) {
  Json counts = Json::object();
  for (const auto& [token, n] : model.counts) counts[token] = n;
  return counts;
}

absl::StatusOr<UnigramModel> CountsFromJson(const Json& counts) {
  if (!counts.is_object()) {
    return absl::InvalidArgumentError("counts must be an object");
  }
  UnigramModel model;
  for (const auto& [token, n] : counts.items()) {
    if (!n.is_number_integer() || n.get<std::int64_t>() < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("count for '", token, "' is not a nonnegative integer"));
    }
    if (n.get<std::int64_t>() > 0) model.Add(token, n.get<std::int64_t>());
  }
  return model;
}

}  // namespace

void UnigramModel::Add(const std::string& token, std::int64_t n) {
  counts[token] += n;
  total += n;
}

void UnigramModel::Merge(const UnigramModel& other) {
  for (const auto& [token, n] : other.counts) counts[token] += n;
  total += other.total;
}

UnigramModel UnigramModel::FromTokens(std::span<const std::string> tokens) {
  UnigramModel model;
  for (const std::string& token : tokens) model.Add(token);
  return model;
}

absl::StatusOr<Distribution> Distribution::FromProbabilities(
    const std::map<std::string, double>& probs) {
  std::vector<Entry> entries;
  entries.reserve(probs.size());
  double sum = 0.0;
  for (const auto& [token, p] : probs) {
    if (!(p > 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability of '", token, "' outside (0, 1]"));
    }
    sum += p;
    entries.emplace_back(token, p);
  }
  if (entries.empty() || std::abs(sum - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities sum to ", sum, ", not 1"));
  }
  return Distribution(std::move(entries));
}

absl::StatusOr<Distribution> Distribution::FromWeights(
    const std::map<std::string, double>& weights) {
  double total = 0.0;
  for (const auto& [token, w] : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      return absl::InvalidArgumentError(
          absl::StrCat("weight of '", token, "' is not positive"));
    }
    total += w;
  }
  if (weights.empty()) return absl::InvalidArgumentError("no weights");
  std::vector<Entry> entries;
  entries.reserve(weights.size());
  for (const auto& [token, w] : weights) entries.emplace_back(token, w / total);
  return Distribution(std::move(entries));
}

double Distribution::Prob(std::string_view token) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), token,
      [](const Entry& e, std::string_view t) { return e.first < t; });
  return (it != entries_.end() && it->first == token) ? it->second : 0.0;
}

absl::StatusOr<Distribution> ToDistribution(const UnigramModel& model) {
  if (model.total <= 0) return absl::InvalidArgumentError("empty model");
  std::map<std::string, double> probs;
  const auto total = static_cast<double>(model.total);
  for (const auto& [token, n] : model.counts) {
    if (n > 0) probs.emplace(token, static_cast<double>(n) / total);
  }
  return Distribution::FromProbabilities(probs);
}

std::vector<std::pair<std::string, std::int64_t>> TopK(
    const UnigramModel& model, std::size_t k) {
  std::vector<std::pair<std::string, std::int64_t>> items(model.counts.begin(),
                                                          model.counts.end());
  const std::size_t n = std::min(k, items.size());
  std::partial_sort(items.begin(), items.begin() + n, items.end(),
                    [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  items.resize(n);
  return items;
}

ModelSet BuildModels(const std::map<ProfileKey, TokenStream>& streams,
                     int workers) {
  std::vector<const TokenStream*> ordered;
  ordered.reserve(streams.size());
  for (const auto& [key, stream] : streams) ordered.push_back(&stream);

  std::vector<UnigramModel> built(ordered.size());
  ParallelFor(ordered.size(), workers, [&](std::size_t i) {
    built[i] = UnigramModel::FromTokens(ordered[i]->tokens);
  });

  ModelSet models;
  std::size_t i = 0;
  for (const auto& [key, stream] : streams) {
    models.communities[key.community_id].Merge(built[i]);
    models.profiles.emplace(key, std::move(built[i]));
    ++i;
  }
  for (const auto& [community, model] : models.communities) {
    models.global.Merge(model);
  }
  return models;
}

std::map<std::string, UnigramModel> CommunityProfiles(
    const ModelSet& models, const std::string& community) {
  std::map<std::string, UnigramModel> out;
  for (const auto& [key, model] : models.profiles) {
    if (key.community_id == community) out.emplace(key.author_id, model);
  }
  return out;
}

absl::Status WriteModelStore(const ModelSet& models, std::ostream& out) {
  for (const auto& [key, model] : models.profiles) {
    Json record = {{"kind", "profile"},
                   {"key", {{"author", key.author_id},
                            {"community", key.community_id}}},
                   {"counts", CountsToJson(model)}};
    out << record.dump() << '\n';
  }
  for (const auto& [community, model] : models.communities) {
    Json record = {{"kind", "community"},
                   {"key", community},
                   {"counts", CountsToJson(model)}};
    out << record.dump() << '\n';
  }
  Json record = {{"kind", "global"},
                 {"key", nullptr},
                 {"counts", CountsToJson(models.global)}};
  out << record.dump() << '\n';
  if (!out) return absl::InternalError("failed writing model store");
  return absl::OkStatus();
}

absl::StatusOr<ModelSet> ReadModelStore(std::istream& in) {
  ModelSet models;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json record = Json::parse(line, nullptr, false);
    auto fail = [line_no](absl::string_view why) {
      return absl::InvalidArgumentError(
          absl::StrCat("model store line ", line_no, ": ", why));
    };
    if (record.is_discarded() || !record.is_object()) {
      return fail("malformed JSON");
    }
    if (!record.contains("kind") || !record["kind"].is_string() ||
        !record.contains("counts")) {
      return fail("missing kind or counts");
    }
    absl::StatusOr<UnigramModel> model = CountsFromJson(record["counts"]);
    if (!model.ok()) return fail(model.status().message());
    const std::string kind = record["kind"].get<std::string>();
    const Json& key = record.contains("key") ? record["key"] : Json();
    if (kind == "profile") {
      if (!key.is_object() || !key.contains("author") ||
          !key.contains("community") || !key["author"].is_string() ||
          !key["community"].is_string()) {
        return fail("profile key needs author and community");
      }
      models.profiles[{key["author"].get<std::string>(),
                       key["community"].get<std::string>()}] = *std::move(model);
    } else if (kind == "community") {
      if (!key.is_string()) return fail("community key must be a string");
      models.communities[key.get<std::string>()] = *std::move(model);
    } else if (kind == "global") {
      models.global = *std::move(model);
    } else {
      return fail(absl::StrCat("unknown kind '", kind, "'"));
    }
  }
  return models;
}

}  // namespace linkrisk
