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

#include "linkrisk/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fnv_internal.h"
#include "json.hpp"
#include "linkrisk/anonymity.h"
#include "linkrisk/corpus.h"
#include "linkrisk/eval.h"
#include "linkrisk/framework.h"
#include "linkrisk/lm.h"
#include "linkrisk/metric.h"
#include "linkrisk/parallel.h"
#include "linkrisk/scenario.h"
#include "linkrisk/status_macros.h"
#include "linkrisk/synth.h"

#ifndef LINKRISK_DATA_DIR
#define LINKRISK_DATA_DIR "data"
#endif

namespace linkrisk::cli {
namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

constexpr char kManifestName[] = "manifest.json";
constexpr char kProfilesName[] = "profiles.jsonl";
constexpr char kModelsName[] = "models.jsonl";

std::string DefaultList(const char* name) {
  return (fs::path(LINKRISK_DATA_DIR) / name).string();
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<std::ifstream> OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return in;
}

absl::Status EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    return absl::FailedPreconditionError(
        absl::StrCat("cannot create output directory ", dir));
  }
  return absl::OkStatus();
}

// Writes a file through `fill`, reporting the path on failure.
template <typename Fill>
absl::Status WriteOutput(const std::string& path, Fill fill) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::FailedPreconditionError(absl::StrCat("cannot write ", path));
  LINKRISK_RETURN_IF_ERROR(fill(out));
  out.close();
  if (!out) return absl::InternalError(absl::StrCat("error writing ", path));
  return absl::OkStatus();
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  return WriteOutput(path, [&](std::ostream& out) {
    out << text;
    return absl::OkStatus();
  });
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// The manifest written next to an input file, if any, as provenance.
Json LoadLineage(const std::string& input) {
  const fs::path manifest = fs::path(input).parent_path() / kManifestName;
  absl::StatusOr<std::string> text = ReadFile(manifest.string());
  if (!text.ok()) return nullptr;
  Json j = Json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return nullptr;
  Json lineage = {{"command", j.value("command", "")},
                  {"parameters", j.value("parameters", Json::object())}};
  if (j.contains("lineage")) lineage["lineage"] = j["lineage"];
  return lineage;
}

// Finds a parameter in a lineage chain, nearest first.
Json FindInLineage(const Json& lineage, const std::string& key) {
  for (const Json* at = &lineage; at->is_object();) {
    if (at->contains("parameters") && (*at)["parameters"].contains(key)) {
      return (*at)["parameters"][key];
    }
    if (!at->contains("lineage")) break;
    at = &(*at)["lineage"];
  }
  return nullptr;
}

class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  Json& parameters() { return parameters_; }
  void set_lineage(Json lineage) { lineage_ = std::move(lineage); }
  void AddInput(const std::string& path) { inputs_.push_back(path); }
  void AddOutput(const std::string& path) { outputs_.push_back(path); }

  absl::Status Write(const std::string& path) const {
    Json j = {{"tool", "linkrisk"},
              {"command", command_},
              {"parameters", parameters_},
              {"inputs", Describe(inputs_)},
              {"outputs", Describe(outputs_)}};
    if (!lineage_.is_null()) j["lineage"] = lineage_;
    return WriteText(path, j.dump(2) + "\n");
  }

 private:
  static Json Describe(const std::vector<std::string>& paths) {
    Json list = Json::array();
    for (const std::string& path : paths) {
      Json entry = {{"path", path}};
      if (absl::StatusOr<std::string> content = ReadFile(path); content.ok()) {
        Fnv1a64 hash;
        hash.Update(*content);
        entry["bytes"] = content->size();
        entry["fnv1a64"] = hash.hex();
      }
      list.push_back(std::move(entry));
    }
    return list;
  }

  std::string command_;
  Json parameters_ = Json::object();
  Json lineage_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

absl::StatusOr<ModelSet> LoadModels(const std::string& path) {
  LINKRISK_ASSIGN_OR_RETURN(std::ifstream in, OpenInput(path));
  absl::StatusOr<ModelSet> models = ReadModelStore(in);
  if (!models.ok()) {
    return absl::Status(models.status().code(),
                        absl::StrCat(path, ": ", models.status().message()));
  }
  return models;
}

absl::StatusOr<std::map<std::string, UnigramModel>> CommunityOrError(
    const ModelSet& models, const std::string& community) {
  std::map<std::string, UnigramModel> profiles = CommunityProfiles(models, community);
  if (profiles.empty()) {
    return absl::NotFoundError(
        absl::StrCat("no profiles in community '", community, "'"));
  }
  return profiles;
}

absl::StatusOr<DistanceMatrix> CommunityMatrix(
    const std::map<std::string, UnigramModel>& profiles, int workers) {
  std::vector<std::string> keys;
  std::vector<Distribution> dists;
  for (const auto& [author, model] : profiles) {
    absl::StatusOr<Distribution> dist = ToDistribution(model);
    if (!dist.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("profile '", author, "': ", dist.status().message()));
    }
    keys.push_back(author);
    dists.push_back(*std::move(dist));
  }
  const std::vector<IndexedDistribution> indexed = IndexDistributions(dists);
  return DistanceMatrix::Compute(std::move(keys), indexed, workers);
}

// ---------------------------------------------------------------- commands

struct CommonOptions {
  int workers = 0;
  std::string config;
};

struct IngestOptions {
  std::vector<std::string> inputs;
  std::string stopwords = DefaultList("stopwords.txt");
  std::string smilies = DefaultList("smilies.txt");
  std::int64_t min_comments = 100;
  std::int64_t min_profiles = 100;
  std::vector<std::string> exclude;
  std::vector<std::string> disable_steps;
  int max_char_repeat = 3;
  bool lenient = false;
  std::string out;
};

absl::Status RunIngest(const IngestOptions& o, int workers, std::ostream& out) {
  if (o.min_comments < 0 || o.min_profiles < 0) {
    return absl::InvalidArgumentError("thresholds must be nonnegative");
  }
  NormalizationConfig config;
  LINKRISK_ASSIGN_OR_RETURN(config.stopwords, LoadWordList(o.stopwords));
  LINKRISK_ASSIGN_OR_RETURN(config.smilies, LoadWordList(o.smilies));
  config.max_char_repeat = o.max_char_repeat;
  for (const std::string& step : o.disable_steps) {
    if (step == "lowercase") config.steps.lowercase = false;
    else if (step == "markdown") config.steps.strip_markdown = false;
    else if (step == "diacritics") config.steps.strip_diacritics = false;
    else if (step == "urls") config.steps.replace_urls = false;
    else if (step == "punctuation") config.steps.strip_punctuation = false;
    else if (step == "repeats") config.steps.collapse_repeats = false;
    else return absl::InvalidArgumentError(absl::StrCat("unknown step '", step, "'"));
  }
  LINKRISK_ASSIGN_OR_RETURN(Normalizer normalizer, Normalizer::Create(config));

  Manifest manifest("ingest");
  std::vector<RawComment> comments;
  Json errors = Json::array();
  for (const std::string& path : o.inputs) {
    LINKRISK_ASSIGN_OR_RETURN(std::ifstream in, OpenInput(path));
    absl::StatusOr<IngestResult> result = IngestJsonl(in, o.lenient);
    if (!result.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": ", result.status().message()));
    }
    for (const IngestError& e : result->errors) {
      errors.push_back({{"file", path}, {"line", e.line}, {"message", e.message}});
    }
    std::move(result->comments.begin(), result->comments.end(),
              std::back_inserter(comments));
    manifest.AddInput(path);
  }
  manifest.AddInput(o.stopwords);
  manifest.AddInput(o.smilies);

  const std::set<std::string> excluded(o.exclude.begin(), o.exclude.end());
  const std::map<ProfileKey, TokenStream> all =
      AggregateProfiles(comments, normalizer, workers);
  const std::map<ProfileKey, TokenStream> kept =
      FilterInteresting(all, o.min_comments, o.min_profiles, excluded);

  LINKRISK_RETURN_IF_ERROR(EnsureDir(o.out));
  const std::string profiles_path = Join(o.out, kProfilesName);
  LINKRISK_RETURN_IF_ERROR(WriteOutput(profiles_path, [&](std::ostream& s) {
    return WriteTokenStreams(kept, s);
  }));
  manifest.AddOutput(profiles_path);
  if (!errors.empty()) {
    const std::string errors_path = Join(o.out, "ingest_errors.json");
    LINKRISK_RETURN_IF_ERROR(WriteText(errors_path, errors.dump(2) + "\n"));
    manifest.AddOutput(errors_path);
  }

  std::set<std::string> communities;
  for (const auto& [key, stream] : kept) communities.insert(key.community_id);
  Json& p = manifest.parameters();
  p["stopwords_hash"] = WordListHash(config.stopwords);
  p["stopwords_count"] = config.stopwords.size();
  p["smilies_hash"] = WordListHash(config.smilies);
  p["smilies_count"] = config.smilies.size();
  p["min_comments"] = o.min_comments;
  p["min_profiles"] = o.min_profiles;
  p["excluded"] = excluded;
  p["disabled_steps"] = o.disable_steps;
  p["max_char_repeat"] = o.max_char_repeat;
  p["lenient"] = o.lenient;
  p["workers"] = workers;
  p["comments"] = comments.size();
  p["rejected_records"] = errors.size();
  p["profiles_before_filter"] = all.size();
  p["profiles_kept"] = kept.size();
  p["communities_kept"] = communities.size();
  if (!o.inputs.empty()) manifest.set_lineage(LoadLineage(o.inputs.front()));
  LINKRISK_RETURN_IF_ERROR(manifest.Write(Join(o.out, kManifestName)));

  out << "ingested " << comments.size() << " comments; kept " << kept.size()
      << " of " << all.size() << " profiles in " << communities.size()
      << " communities";
  if (!errors.empty()) out << "; skipped " << errors.size() << " bad records";
  out << "\n";
  return absl::OkStatus();
}

struct BuildModelsOptions {
  std::string input;
  std::string out;
};

absl::Status RunBuildModels(const BuildModelsOptions& o, int workers,
                            std::ostream& out) {
  LINKRISK_ASSIGN_OR_RETURN(std::ifstream in, OpenInput(o.input));
  absl::StatusOr<std::map<ProfileKey, TokenStream>> streams = ReadTokenStreams(in);
  if (!streams.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(o.input, ": ", streams.status().message()));
  }
  const ModelSet models = BuildModels(*streams, workers);
  LINKRISK_RETURN_IF_ERROR(EnsureDir(o.out));
  const std::string path = Join(o.out, kModelsName);
  LINKRISK_RETURN_IF_ERROR(
      WriteOutput(path, [&](std::ostream& s) { return WriteModelStore(models, s); }));

  Manifest manifest("build-models");
  manifest.AddInput(o.input);
  manifest.AddOutput(path);
  manifest.parameters()["workers"] = workers;
  manifest.parameters()["profiles"] = models.profiles.size();
  manifest.parameters()["communities"] = models.communities.size();
  manifest.parameters()["tokens"] = models.global.total;
  manifest.set_lineage(LoadLineage(o.input));
  LINKRISK_RETURN_IF_ERROR(manifest.Write(Join(o.out, kManifestName)));
  out << "built " << models.profiles.size() << " profile models in "
      << models.communities.size() << " communities (" << models.global.total
      << " tokens)\n";
  return absl::OkStatus();
}

struct TopUnigramsOptions {
  std::string models;
  std::string key;
  bool global = false;
  std::size_t k = 20;
  std::string manifest;
};

absl::Status RunTopUnigrams(const TopUnigramsOptions& o, std::ostream& out) {
  if (o.global == !o.key.empty()) {
    return absl::InvalidArgumentError("give exactly one of --key or --global");
  }
  LINKRISK_ASSIGN_OR_RETURN(ModelSet models, LoadModels(o.models));
  const UnigramModel* model = &models.global;
  if (!o.global) {
    const auto it = models.communities.find(o.key);
    if (it == models.communities.end()) {
      return absl::NotFoundError(absl::StrCat("no community '", o.key, "'"));
    }
    model = &it->second;
  }
  for (const auto& [token, count] : TopK(*model, o.k)) {
    out << token << '\t' << count << '\n';
  }
  if (!o.manifest.empty()) {
    Manifest manifest("top-unigrams");
    manifest.AddInput(o.models);
    manifest.parameters() = {{"key", o.global ? Json(nullptr) : Json(o.key)},
                             {"k", o.k}};
    LINKRISK_RETURN_IF_ERROR(manifest.Write(o.manifest));
  }
  return absl::OkStatus();
}

struct DistancesOptions {
  std::string models;
  std::vector<std::string> communities;
  std::string out;
};

absl::Status RunDistances(const DistancesOptions& o, int workers, std::ostream& out) {
  LINKRISK_ASSIGN_OR_RETURN(ModelSet models, LoadModels(o.models));
  LINKRISK_RETURN_IF_ERROR(EnsureDir(o.out));
  Manifest manifest("distances");
  manifest.AddInput(o.models);
  std::vector<std::pair<std::string, DistanceStats>> stats;
  std::map<std::string, std::map<std::string, UnigramModel>> selected;
  for (const std::string& community : o.communities) {
    LINKRISK_ASSIGN_OR_RETURN(selected[community], CommunityOrError(models, community));
    LINKRISK_ASSIGN_OR_RETURN(DistanceMatrix m,
                              CommunityMatrix(selected[community], workers));
    const std::string path = Join(o.out, absl::StrCat(community, ".lrdm"));
    LINKRISK_RETURN_IF_ERROR(
        WriteOutput(path, [&](std::ostream& s) { return WriteDistanceMatrix(m, s); }));
    manifest.AddOutput(path);
    if (m.size() >= 2) {
      LINKRISK_ASSIGN_OR_RETURN(DistanceStats s, WithinStats(m));
      stats.emplace_back(absl::StrCat("within:", community), s);
    }
    out << community << ": " << m.size() << " profiles -> " << path << "\n";
  }
  for (std::size_t i = 0; i < o.communities.size(); ++i) {
    for (std::size_t j = i + 1; j < o.communities.size(); ++j) {
      LINKRISK_ASSIGN_OR_RETURN(
          LinkageExperiment experiment,
          LinkageExperiment::Build(selected[o.communities[i]],
                                   selected[o.communities[j]], workers));
      LINKRISK_ASSIGN_OR_RETURN(DistanceStats s, AcrossStats(experiment.cross()));
      stats.emplace_back(
          absl::StrCat("across:", o.communities[i], ":", o.communities[j]), s);
    }
  }
  const std::string stats_path = Join(o.out, "distance_stats.csv");
  LINKRISK_RETURN_IF_ERROR(WriteOutput(
      stats_path, [&](std::ostream& s) { return WriteDistanceStatsCsv(stats, s); }));
  manifest.AddOutput(stats_path);
  manifest.parameters() = {{"communities", o.communities}, {"workers", workers}};
  manifest.set_lineage(LoadLineage(o.models));
  return manifest.Write(Join(o.out, kManifestName));
}

struct AnonymityOptions {
  std::string matrix;
  std::string models;
  std::string community;
  std::string subject;
  double d = 0.0;
  std::size_t k = 0;
  std::string manifest;
};

absl::Status RunAnonymity(const AnonymityOptions& o, int workers, std::ostream& out) {
  if (!(o.d >= 0.0 && o.d <= 1.0)) {
    return absl::InvalidArgumentError("--d must lie in [0, 1]");
  }
  DistanceMatrix m;
  std::string input;
  if (!o.matrix.empty()) {
    input = o.matrix;
    LINKRISK_ASSIGN_OR_RETURN(std::ifstream in, OpenInput(o.matrix));
    absl::StatusOr<DistanceMatrix> read = ReadDistanceMatrix(in);
    if (!read.ok()) {
      return absl::Status(read.status().code(),
                          absl::StrCat(o.matrix, ": ", read.status().message()));
    }
    m = *std::move(read);
  } else if (!o.models.empty() && !o.community.empty()) {
    input = o.models;
    LINKRISK_ASSIGN_OR_RETURN(ModelSet models, LoadModels(o.models));
    LINKRISK_ASSIGN_OR_RETURN(auto profiles, CommunityOrError(models, o.community));
    LINKRISK_ASSIGN_OR_RETURN(m, CommunityMatrix(profiles, workers));
  } else {
    return absl::InvalidArgumentError("give --matrix or --models with --community");
  }
  LINKRISK_ASSIGN_OR_RETURN(AnonymityResult result,
                            ConvergentSubset(m, o.subject, o.d));
  Json j = {{"subject", result.subject},
            {"d", result.d},
            {"k", result.k},
            {"members", result.members}};
  if (o.k > 0) j["kd_anonymous"] = result.k >= o.k;
  out << j.dump(2) << "\n";
  if (!o.manifest.empty()) {
    Manifest manifest("anonymity");
    manifest.AddInput(input);
    manifest.parameters() = {{"subject", o.subject}, {"d", o.d}, {"k", o.k},
                             {"community", o.community}};
    LINKRISK_RETURN_IF_ERROR(manifest.Write(o.manifest));
  }
  return absl::OkStatus();
}

struct BoundOptions {
  double c = 0.0;
  double d = 0.0;
  std::size_t k = 1;
  std::string manifest;
};

absl::Status RunBound(const BoundOptions& o, std::ostream& out) {
  LINKRISK_ASSIGN_OR_RETURN(MatchingBound bound, ComputeMatchingBound(o.c, o.d, o.k));
  out << "c=" << FormatReal(bound.c) << " d=" << FormatReal(bound.d)
      << " k=" << bound.k << " t=" << FormatReal(bound.t) << "\n";
  if (!o.manifest.empty()) {
    Manifest manifest("bound");
    manifest.parameters() = {{"c", o.c}, {"d", o.d}, {"k", o.k}, {"t", bound.t}};
    LINKRISK_RETURN_IF_ERROR(manifest.Write(o.manifest));
  }
  return absl::OkStatus();
}

struct EvalOptions {
  std::string models;
  std::string community_a;
  std::string community_b;
  std::vector<std::size_t> k = {1, 5, 10, 20};
  std::string links;
  std::string subset_side = "source";
  std::size_t bin_width = kDefaultBinWidth;
  std::string out;
};

absl::Status RunEval(const EvalOptions& o, int workers, std::ostream& out) {
  if (o.k.empty() ||
      std::any_of(o.k.begin(), o.k.end(), [](std::size_t k) { return k < 1; })) {
    return absl::InvalidArgumentError("--k values must be at least 1");
  }
  if (o.bin_width < 1) return absl::InvalidArgumentError("--bin-width must be positive");
  if (o.subset_side != "target" && o.subset_side != "source") {
    return absl::InvalidArgumentError("--subset-side must be target or source");
  }
  const SubsetSide side =
      o.subset_side == "target" ? SubsetSide::kTarget : SubsetSide::kSource;

  Manifest manifest("eval");
  LINKRISK_ASSIGN_OR_RETURN(ModelSet models, LoadModels(o.models));
  manifest.AddInput(o.models);
  LINKRISK_ASSIGN_OR_RETURN(auto a, CommunityOrError(models, o.community_a));
  LINKRISK_ASSIGN_OR_RETURN(auto b, CommunityOrError(models, o.community_b));
  LINKRISK_ASSIGN_OR_RETURN(LinkageExperiment experiment,
                            LinkageExperiment::Build(a, b, workers));

  std::vector<GroundTruthLink> links;
  if (!o.links.empty()) {
    LINKRISK_ASSIGN_OR_RETURN(std::ifstream in, OpenInput(o.links));
    absl::StatusOr<std::vector<GroundTruthLink>> read = ReadLinksCsv(in);
    if (!read.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(o.links, ": ", read.status().message()));
    }
    // Links to profiles dropped by filtering cannot be evaluated.
    for (GroundTruthLink& link : *read) {
      if (link.same_user && experiment.within_a().Index(link.source).ok() &&
          experiment.within_b().Index(link.target).ok()) {
        links.push_back(std::move(link));
      }
    }
    manifest.AddInput(o.links);
  } else {
    links = experiment.SharedAuthorLinks();
  }
  if (links.empty()) {
    return absl::FailedPreconditionError("no ground truth links between the communities");
  }

  LINKRISK_ASSIGN_OR_RETURN(std::vector<LinkAnonymity> rows,
                            LinkAnonymities(experiment, links, side));
  std::vector<std::pair<std::size_t, double>> precision;
  std::vector<PrecisionReport> reports;
  Json correlations = Json::object();
  for (std::size_t k : o.k) {
    LINKRISK_ASSIGN_OR_RETURN(double p, PrecisionAtK(experiment, links, k));
    precision.emplace_back(k, p);
    reports.push_back(BinPrecision(rows, k, o.bin_width));
    std::vector<double> bins;
    std::vector<double> values;
    for (const PrecisionBin& bin : reports.back().bins) {
      bins.push_back(static_cast<double>(bin.lo));
      values.push_back(bin.precision);
    }
    absl::StatusOr<double> rho = SpearmanCorrelation(bins, values);
    correlations[std::to_string(k)] = rho.ok() ? Json(*rho) : Json(nullptr);
  }
  LINKRISK_ASSIGN_OR_RETURN(Scatter scatter, MatchedVsAverageScatter(experiment, links));
  std::vector<std::pair<std::string, DistanceStats>> stats;
  if (experiment.within_a().size() >= 2) {
    LINKRISK_ASSIGN_OR_RETURN(DistanceStats s, WithinStats(experiment.within_a()));
    stats.emplace_back(absl::StrCat("within:", o.community_a), s);
  }
  if (experiment.within_b().size() >= 2) {
    LINKRISK_ASSIGN_OR_RETURN(DistanceStats s, WithinStats(experiment.within_b()));
    stats.emplace_back(absl::StrCat("within:", o.community_b), s);
  }
  LINKRISK_ASSIGN_OR_RETURN(DistanceStats across, AcrossStats(experiment.cross()));
  stats.emplace_back(absl::StrCat("across:", o.community_a, ":", o.community_b), across);

  LINKRISK_RETURN_IF_ERROR(EnsureDir(o.out));
  auto emit = [&](const std::string& name, auto fill) -> absl::Status {
    const std::string path = Join(o.out, name);
    LINKRISK_RETURN_IF_ERROR(WriteOutput(path, fill));
    manifest.AddOutput(path);
    return absl::OkStatus();
  };
  LINKRISK_RETURN_IF_ERROR(emit("precision_at_k.csv", [&](std::ostream& s) {
    return WritePrecisionCsv(precision, links.size(), s);
  }));
  LINKRISK_RETURN_IF_ERROR(emit("anon_vs_precision.csv", [&](std::ostream& s) {
    return WriteAnonVsPrecisionCsv(reports, s);
  }));
  LINKRISK_RETURN_IF_ERROR(emit("link_anonymity.csv", [&](std::ostream& s) {
    return WriteLinkAnonymityCsv(rows, s);
  }));
  LINKRISK_RETURN_IF_ERROR(emit("scatter.csv", [&](std::ostream& s) {
    return WriteScatterCsv(scatter, s);
  }));
  LINKRISK_RETURN_IF_ERROR(emit("distance_stats.csv", [&](std::ostream& s) {
    return WriteDistanceStatsCsv(stats, s);
  }));

  const Json lineage = LoadLineage(o.models);
  Json meta = {
      {"community_a", o.community_a},
      {"community_b", o.community_b},
      {"profiles_a", experiment.within_a().size()},
      {"profiles_b", experiment.within_b().size()},
      {"links", links.size()},
      {"links_source", o.links.empty() ? Json("shared-author") : Json(o.links)},
      {"k", o.k},
      {"bin_width", o.bin_width},
      {"subset_side", o.subset_side},
      {"fraction_below_diagonal", scatter.fraction_below_diagonal},
      {"spearman_bin_vs_precision", correlations},
      {"seed", FindInLineage(lineage, "seed")},
      {"stopwords_hash", FindInLineage(lineage, "stopwords_hash")},
      {"smilies_hash", FindInLineage(lineage, "smilies_hash")},
      {"min_comments", FindInLineage(lineage, "min_comments")},
      {"min_profiles", FindInLineage(lineage, "min_profiles")},
  };
  LINKRISK_RETURN_IF_ERROR(emit("eval_meta.json", [&](std::ostream& s) {
    s << meta.dump(2) << "\n";
    return absl::OkStatus();
  }));
  manifest.parameters() = {{"community_a", o.community_a},
                           {"community_b", o.community_b},
                           {"k", o.k},
                           {"bin_width", o.bin_width},
                           {"subset_side", o.subset_side},
                           {"workers", workers}};
  manifest.set_lineage(lineage);
  LINKRISK_RETURN_IF_ERROR(manifest.Write(Join(o.out, kManifestName)));

  out << links.size() << " links between " << o.community_a << " ("
      << experiment.within_a().size() << " profiles) and " << o.community_b << " ("
      << experiment.within_b().size() << " profiles)\n";
  for (const auto& [k, p] : precision) {
    out << "precision@" << k << " = " << FormatReal(p) << "\n";
  }
  out << "below diagonal = " << FormatReal(scatter.fraction_below_diagonal) << "\n";
  return absl::OkStatus();
}

struct SynthOptions {
  SynthParams params;
  std::string out;
};

absl::Status RunSynth(const SynthOptions& o, std::ostream& out) {
  LINKRISK_ASSIGN_OR_RETURN(SynthCorpus corpus, SynthesizeCorpus(o.params));
  LINKRISK_RETURN_IF_ERROR(EnsureDir(o.out));
  Manifest manifest("synth");
  const SynthParams& p = o.params;
  const std::string path_a = Join(o.out, p.community_a + ".jsonl");
  const std::string path_b = Join(o.out, p.community_b + ".jsonl");
  const std::string path_links = Join(o.out, "links.csv");
  LINKRISK_RETURN_IF_ERROR(WriteOutput(path_a, [&](std::ostream& s) {
    return WriteCommentsJsonl(corpus.community_a, s);
  }));
  LINKRISK_RETURN_IF_ERROR(WriteOutput(path_b, [&](std::ostream& s) {
    return WriteCommentsJsonl(corpus.community_b, s);
  }));
  LINKRISK_RETURN_IF_ERROR(WriteOutput(path_links, [&](std::ostream& s) {
    return WriteLinksCsv(corpus.links, p.community_a, p.community_b, s);
  }));
  manifest.AddOutput(path_a);
  manifest.AddOutput(path_b);
  manifest.AddOutput(path_links);
  manifest.parameters() = {{"users", p.users},
                           {"topics", p.topics},
                           {"comments_per_user", p.comments_per_user},
                           {"tokens_per_comment", p.tokens_per_comment},
                           {"idiosyncrasy", p.idiosyncrasy},
                           {"spread", p.spread},
                           {"words_per_topic", p.words_per_topic},
                           {"personal_words", p.personal_words},
                           {"personal_pool", p.personal_pool},
                           {"zipf_exponent", p.zipf_exponent},
                           {"seed", p.seed},
                           {"community_a", p.community_a},
                           {"community_b", p.community_b}};
  LINKRISK_RETURN_IF_ERROR(manifest.Write(Join(o.out, kManifestName)));
  out << "wrote " << corpus.community_a.size() + corpus.community_b.size()
      << " comments by " << p.users << " users to " << o.out << "\n";
  return absl::OkStatus();
}

struct FrameworkOptions {
  std::string scenario;
  std::string out;
  std::string manifest;
};

absl::Status RunFrameworkScenario(const FrameworkOptions& o, std::ostream& out) {
  LINKRISK_ASSIGN_OR_RETURN(std::string text, ReadFile(o.scenario));
  absl::StatusOr<framework::Scenario> scenario = framework::ParseScenario(text);
  if (!scenario.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(o.scenario, ": ", scenario.status().message()));
  }
  LINKRISK_ASSIGN_OR_RETURN(std::string report, framework::RunScenario(*scenario));
  out << report << "\n";
  Manifest manifest("framework run");
  manifest.AddInput(o.scenario);
  if (!o.out.empty()) {
    LINKRISK_RETURN_IF_ERROR(WriteText(o.out, report + "\n"));
    manifest.AddOutput(o.out);
  }
  if (!o.manifest.empty()) LINKRISK_RETURN_IF_ERROR(manifest.Write(o.manifest));
  return absl::OkStatus();
}

absl::Status RunFrameworkImpossibility(const FrameworkOptions& o, std::ostream& out) {
  const framework::ImpossibilitySetup setup = framework::DefaultImpossibilitySetup();
  LINKRISK_ASSIGN_OR_RETURN(framework::ImpossibilityReport report,
                            framework::RunImpossibility(setup));
  const std::string json = framework::ImpossibilityReportJson(setup, report);
  out << json << "\n";
  Manifest manifest("framework impossibility");
  manifest.parameters()["sd"] = report.sd;
  if (!o.out.empty()) {
    LINKRISK_RETURN_IF_ERROR(WriteText(o.out, json + "\n"));
    manifest.AddOutput(o.out);
  }
  if (!o.manifest.empty()) LINKRISK_RETURN_IF_ERROR(manifest.Write(o.manifest));
  return absl::OkStatus();
}

}  // namespace

bool ExpandConfig(std::vector<std::string>& args, std::string& error) {
  std::string path;
  bool found = false;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      found = true;
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      found = true;
      args.erase(args.begin() + i);
      break;
    }
  }
  if (!found) return true;
  std::ifstream in(path);
  if (!in) {
    error = absl::StrCat("cannot open ", path);
    return false;
  }
  std::set<std::string> given;
  for (const std::string& arg : args) {
    if (arg.rfind("--", 0) == 0) given.insert(arg.substr(2, arg.find('=') - 2));
  }
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      error = absl::StrCat(path, ":", line_no, ": expected key=value");
      return false;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      error = absl::StrCat(path, ":", line_no, ": empty key");
      return false;
    }
    if (given.contains(key)) continue;
    extra.push_back(absl::StrCat("--", key, "=", value));
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return true;
}

int Dispatch(const std::vector<std::string>& raw_args, std::ostream& out,
             std::ostream& err) {
  std::vector<std::string> args = raw_args;
  if (args.empty()) args.push_back("linkrisk");
  std::string config_error;
  if (!ExpandConfig(args, config_error)) {
    err << "linkrisk: " << config_error << "\n";
    return kExitRuntime;
  }

  CLI::App app{"Identity linkability analysis for pseudonymous text corpora.",
               "linkrisk"};
  app.fallthrough();
  app.require_subcommand(1);
  app.footer(
      "Any long option can also come from a key=value file given with "
      "--config <file>; flags on the command line win. LINKRISK_WORKERS sets "
      "the default worker count.");
  CommonOptions common;
  app.add_option("--workers", common.workers,
                 "worker threads (default: LINKRISK_WORKERS or all cores)");
  app.add_option("--config", common.config, "key=value configuration file");

  IngestOptions ingest;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "normalize comments into per-profile token streams");
  ingest_cmd->add_option("--input", ingest.inputs, "JSON Lines corpus (repeatable)")
      ->required();
  ingest_cmd->add_option("--stopwords", ingest.stopwords, "stopword list")
      ->capture_default_str();
  ingest_cmd->add_option("--smilies", ingest.smilies, "smiley list")
      ->capture_default_str();
  ingest_cmd->add_option("--min-comments", ingest.min_comments,
                         "minimum comments per profile")->capture_default_str();
  ingest_cmd->add_option("--min-profiles", ingest.min_profiles,
                         "minimum qualifying profiles per community")
      ->capture_default_str();
  ingest_cmd->add_option("--exclude", ingest.exclude, "community to drop (repeatable)");
  ingest_cmd->add_option("--disable-step", ingest.disable_steps,
                         "skip a normalization step: lowercase, markdown, "
                         "diacritics, urls, punctuation, repeats");
  ingest_cmd->add_option("--max-char-repeat", ingest.max_char_repeat,
                         "longest kept run of one character")->capture_default_str();
  ingest_cmd->add_flag("--lenient", ingest.lenient, "skip malformed records");
  ingest_cmd->add_option("--out", ingest.out, "output directory")->required();

  BuildModelsOptions build;
  CLI::App* build_cmd =
      app.add_subcommand("build-models", "aggregate unigram models from token streams");
  build_cmd->add_option("--input", build.input, "profiles.jsonl from ingest")->required();
  build_cmd->add_option("--out", build.out, "output directory")->required();

  TopUnigramsOptions top;
  CLI::App* top_cmd = app.add_subcommand("top-unigrams", "most frequent tokens of a model");
  top_cmd->add_option("--models", top.models, "model store")->required();
  top_cmd->add_option("--key", top.key, "community");
  top_cmd->add_flag("--global", top.global, "use the global model");
  top_cmd->add_option("-k,--k", top.k, "number of tokens")->capture_default_str();
  top_cmd->add_option("--manifest", top.manifest, "write a manifest to this path");

  DistancesOptions distances;
  CLI::App* distances_cmd =
      app.add_subcommand("distances", "pairwise profile distance matrices");
  distances_cmd->add_option("--models", distances.models, "model store")->required();
  distances_cmd->add_option("--community", distances.communities,
                            "community (repeatable)")->required();
  distances_cmd->add_option("--out", distances.out, "output directory")->required();

  AnonymityOptions anonymity;
  CLI::App* anonymity_cmd =
      app.add_subcommand("anonymity", "anonymous subset of a profile");
  anonymity_cmd->add_option("--matrix", anonymity.matrix, "distance matrix file");
  anonymity_cmd->add_option("--models", anonymity.models, "model store");
  anonymity_cmd->add_option("--community", anonymity.community, "community");
  anonymity_cmd->add_option("--subject", anonymity.subject, "profile (author)")
      ->required();
  anonymity_cmd->add_option("--d", anonymity.d, "convergence radius")->required();
  anonymity_cmd->add_option("--k", anonymity.k, "also test (k,d)-anonymity");
  anonymity_cmd->add_option("--manifest", anonymity.manifest,
                            "write a manifest to this path");

  BoundOptions bound;
  CLI::App* bound_cmd = app.add_subcommand("bound", "matching likelihood bound t");
  bound_cmd->add_option("--c", bound.c, "matching distance")->required();
  bound_cmd->add_option("--d", bound.d, "convergence radius")->required();
  bound_cmd->add_option("--k", bound.k, "anonymous subset size")->required();
  bound_cmd->add_option("--manifest", bound.manifest, "write a manifest to this path");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "cross-community linkage evaluation");
  eval_cmd->add_option("--models", eval.models, "model store")->required();
  eval_cmd->add_option("--community-a", eval.community_a, "source community")->required();
  eval_cmd->add_option("--community-b", eval.community_b, "target community")->required();
  eval_cmd->add_option("--k", eval.k, "precision@k cutoffs")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--links", eval.links,
                       "ground truth CSV (default: shared author ids)");
  eval_cmd->add_option("--subset-side", eval.subset_side,
                       "anonymous subset of the source or target profile")
      ->capture_default_str();
  eval_cmd->add_option("--bin-width", eval.bin_width, "subset size bin width")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "report directory")->required();

  SynthOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate a synthetic two-community corpus");
  SynthParams& sp = synth.params;
  synth_cmd->add_option("--users", sp.users, "users")->capture_default_str();
  synth_cmd->add_option("--topics", sp.topics, "topics")->capture_default_str();
  synth_cmd->add_option("--seed", sp.seed, "random seed")->capture_default_str();
  synth_cmd->add_option("--comments-per-user", sp.comments_per_user,
                        "comments per user and community")->capture_default_str();
  synth_cmd->add_option("--tokens-per-comment", sp.tokens_per_comment,
                        "tokens per comment")->capture_default_str();
  synth_cmd->add_option("--idiosyncrasy", sp.idiosyncrasy,
                        "mean weight of personal vocabulary")->capture_default_str();
  synth_cmd->add_option("--spread", sp.spread,
                        "relative spread of the personal weight")->capture_default_str();
  synth_cmd->add_option("--words-per-topic", sp.words_per_topic, "topic vocabulary")
      ->capture_default_str();
  synth_cmd->add_option("--personal-words", sp.personal_words,
                        "personal vocabulary per user")->capture_default_str();
  synth_cmd->add_option("--personal-pool", sp.personal_pool,
                        "shared pool of personal words")->capture_default_str();
  synth_cmd->add_option("--zipf", sp.zipf_exponent, "Zipf exponent of word ranks")
      ->capture_default_str();
  synth_cmd->add_option("--community-a", sp.community_a, "first community name")
      ->capture_default_str();
  synth_cmd->add_option("--community-b", sp.community_b, "second community name")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  FrameworkOptions fw;
  CLI::App* fw_cmd = app.add_subcommand("framework", "privacy framework scenarios");
  fw_cmd->require_subcommand(1);
  CLI::App* fw_run = fw_cmd->add_subcommand("run", "evaluate a scenario file");
  fw_run->add_option("scenario", fw.scenario, "scenario JSON")->required();
  fw_run->add_option("--out", fw.out, "also write the report here");
  fw_run->add_option("--manifest", fw.manifest, "write a manifest to this path");
  CLI::App* fw_impossible = fw_cmd->add_subcommand(
      "impossibility", "total variation between posteriors after a value swap");
  fw_impossible->add_option("--out", fw.out, "also write the report here");
  fw_impossible->add_option("--manifest", fw.manifest, "write a manifest to this path");

  if (args.size() >= 2 && args[1].rfind("-", 0) != 0) {
    bool known = false;
    for (const CLI::App* sub : app.get_subcommands({})) {
      known = known || sub->get_name() == args[1];
    }
    if (!known) {
      err << "linkrisk: unknown command '" << args[1] << "'\n\n" << app.help();
      return kExitUsage;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (CLI::App* sub = &app; sub != nullptr;) {
      const auto parsed = sub->get_subcommands();
      sub = parsed.empty() ? nullptr : parsed.front();
      if (sub != nullptr) target = sub;
    }
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "linkrisk: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const int workers = common.workers > 0 ? common.workers : DefaultWorkerCount();
  absl::Status status;
  std::string command;
  if (ingest_cmd->parsed()) {
    command = "ingest";
    status = RunIngest(ingest, workers, out);
  } else if (build_cmd->parsed()) {
    command = "build-models";
    status = RunBuildModels(build, workers, out);
  } else if (top_cmd->parsed()) {
    command = "top-unigrams";
    status = RunTopUnigrams(top, out);
  } else if (distances_cmd->parsed()) {
    command = "distances";
    status = RunDistances(distances, workers, out);
  } else if (anonymity_cmd->parsed()) {
    command = "anonymity";
    status = RunAnonymity(anonymity, workers, out);
  } else if (bound_cmd->parsed()) {
    command = "bound";
    status = RunBound(bound, out);
  } else if (eval_cmd->parsed()) {
    command = "eval";
    status = RunEval(eval, workers, out);
  } else if (synth_cmd->parsed()) {
    command = "synth";
    status = RunSynth(synth, out);
  } else if (fw_run->parsed()) {
    command = "framework run";
    status = RunFrameworkScenario(fw, out);
  } else if (fw_impossible->parsed()) {
    command = "framework impossibility";
    status = RunFrameworkImpossibility(fw, out);
  }
  if (!status.ok()) {
    err << "linkrisk " << command << ": " << status.message() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int Dispatch(int argc, char** argv) {
  return Dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace linkrisk::cli
