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

#include "linkrisk/scenario.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "linkrisk/status_macros.h"

namespace linkrisk::framework {
namespace {

using Json = nlohmann::json;

absl::Status Invalid(std::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("scenario: ", std::string(what)));
}

absl::StatusOr<AttributeUniverse> ParseUniverse(const Json& j) {
  std::vector<std::pair<std::string, std::vector<std::string>>> domains;
  auto values_of = [](const Json& v) -> absl::StatusOr<std::vector<std::string>> {
    if (!v.is_array()) return Invalid("attribute values must be an array");
    std::vector<std::string> out;
    for (const Json& x : v) {
      if (!x.is_string()) return Invalid("attribute values must be strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  };
  if (j.is_object()) {
    for (const auto& [name, values] : j.items()) {
      LINKRISK_ASSIGN_OR_RETURN(std::vector<std::string> v, values_of(values));
      domains.emplace_back(name, std::move(v));
    }
  } else if (j.is_array()) {
    for (const Json& entry : j) {
      if (!entry.is_object() || !entry.contains("name") ||
          !entry["name"].is_string() || !entry.contains("values")) {
        return Invalid("attribute entries need a name and values");
      }
      LINKRISK_ASSIGN_OR_RETURN(std::vector<std::string> v,
                                values_of(entry["values"]));
      domains.emplace_back(entry["name"].get<std::string>(), std::move(v));
    }
  } else {
    return Invalid("missing attributes");
  }
  if (domains.empty()) return Invalid("no attributes declared");
  return AttributeUniverse::Create(std::move(domains));
}

absl::StatusOr<std::size_t> AttributeIndex(const AttributeUniverse& universe,
                                           const std::string& name) {
  absl::StatusOr<std::size_t> a = universe.Index(name);
  if (!a.ok()) return Invalid(absl::StrCat("unknown attribute '", name, "'"));
  return *a;
}

absl::Status CheckValue(const AttributeUniverse& universe, std::size_t attr,
                        const std::string& value) {
  const std::vector<std::string>& domain = universe.domain(attr);
  if (std::find(domain.begin(), domain.end(), value) == domain.end()) {
    return Invalid(absl::StrCat("value '", value, "' not in the domain of '",
                                universe.name(attr), "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<EntityModel> ParseModel(const AttributeUniverse& universe,
                                       const Json& j) {
  if (!j.is_object()) return Invalid("a model must be an object");
  EntityModel model(universe.size());
  for (const auto& [name, value] : j.items()) {
    LINKRISK_ASSIGN_OR_RETURN(std::size_t a, AttributeIndex(universe, name));
    if (value.is_null()) continue;
    if (!value.is_string()) return Invalid("attribute values must be strings");
    const std::string v = value.get<std::string>();
    LINKRISK_RETURN_IF_ERROR(CheckValue(universe, a, v));
    model.set(a, v);
  }
  return model;
}

Json ModelJson(const AttributeUniverse& universe, const EntityModel& model) {
  Json j = Json::object();
  for (std::size_t a = 0; a < universe.size(); ++a) {
    j[universe.name(a)] = model.value(a) ? Json(*model.value(a)) : Json(nullptr);
  }
  return j;
}

absl::StatusOr<PublicationConfig> ParsePublication(
    const AttributeUniverse& universe, const Json& j) {
  if (!j.is_object()) return Invalid("publication entries must be objects");
  PublicationConfig config;
  if (!j.contains("select")) {
    config = PublicationConfig::Identity(universe);
  } else {
    if (!j["select"].is_array()) return Invalid("select must be an array");
    for (const Json& name : j["select"]) {
      if (!name.is_string()) return Invalid("select entries must be names");
      LINKRISK_ASSIGN_OR_RETURN(std::size_t a,
                                AttributeIndex(universe, name.get<std::string>()));
      config.selected.insert(a);
    }
  }
  if (j.contains("perturb")) {
    if (!j["perturb"].is_object()) return Invalid("perturb must be an object");
    for (const auto& [name, values] : j["perturb"].items()) {
      LINKRISK_ASSIGN_OR_RETURN(std::size_t a, AttributeIndex(universe, name));
      if (!values.is_array()) return Invalid("perturb values must be an array");
      std::vector<std::string>& out = config.perturb[a];
      for (const Json& v : values) {
        if (!v.is_string()) return Invalid("perturb values must be strings");
        LINKRISK_RETURN_IF_ERROR(CheckValue(universe, a, v.get<std::string>()));
        out.push_back(v.get<std::string>());
      }
    }
  }
  LINKRISK_RETURN_IF_ERROR(config.Validate(universe.size()));
  return config;
}

absl::StatusOr<WorldKnowledge> NamedKnowledge(const std::string& name) {
  if (name == "empty") return EmptyWorldKnowledge();
  if (name == "consistency") return ConsistencyKnowledge();
  if (name == "zero") {
    return WorldKnowledge([](const EntityModel&, const EntityModel&) { return 0.0; });
  }
  return Invalid(absl::StrCat("unknown world knowledge '", name, "'"));
}

absl::StatusOr<WorldKnowledge> ParseKnowledge(const Scenario& s, const Json& j) {
  if (j.is_null()) return EmptyWorldKnowledge();
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    return Invalid("kappa needs a type");
  }
  const std::string type = j["type"].get<std::string>();
  if (type != "table") return NamedKnowledge(type);
  WorldKnowledge fallback = EmptyWorldKnowledge();
  if (j.contains("fallback")) {
    if (!j["fallback"].is_string()) return Invalid("fallback must be a name");
    LINKRISK_ASSIGN_OR_RETURN(fallback, NamedKnowledge(j["fallback"].get<std::string>()));
  }
  std::map<EntityModel, std::vector<double>> rows;
  if (!j.contains("rows") || !j["rows"].is_array()) {
    return Invalid("table kappa needs rows");
  }
  for (const Json& row : j["rows"]) {
    if (!row.is_object() || !row.contains("observed") ||
        !row.contains("likelihoods") || !row["likelihoods"].is_array()) {
      return Invalid("kappa rows need observed and likelihoods");
    }
    LINKRISK_ASSIGN_OR_RETURN(EntityModel observed,
                              ParseModel(s.universe, row["observed"]));
    std::vector<double> likelihoods;
    for (const Json& x : row["likelihoods"]) {
      if (!x.is_number()) return Invalid("likelihoods must be numbers");
      const double v = x.get<double>();
      if (!(v >= 0.0 && v <= 1.0)) return Invalid("likelihoods must lie in [0, 1]");
      likelihoods.push_back(v);
    }
    if (likelihoods.size() != s.adversary.candidates.size()) {
      return Invalid("a kappa row needs one likelihood per candidate");
    }
    rows[observed] = std::move(likelihoods);
  }
  return TableKnowledge(std::move(rows), s.adversary.candidates, std::move(fallback));
}

// Nonempty subsets of `attrs` with at most `max_size` members, by size then
// lexicographically.
std::vector<AttributeSet> Subsets(const AttributeSet& attrs, std::size_t max_size) {
  const std::vector<std::size_t> items(attrs.begin(), attrs.end());
  std::vector<AttributeSet> out;
  for (std::size_t size = 1; size <= std::min(max_size, items.size()); ++size) {
    std::vector<bool> pick(items.size(), false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
      AttributeSet s;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (pick[i]) s.insert(items[i]);
      }
      out.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

Json NamesJson(const AttributeUniverse& universe, const AttributeSet& attrs) {
  Json j = Json::array();
  for (std::size_t a : attrs) j.push_back(universe.name(a));
  return j;
}

}  // namespace

absl::StatusOr<Scenario> ParseScenario(std::string_view json_text) {
  const Json j = Json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return Invalid("malformed JSON");
  Scenario s;
  LINKRISK_ASSIGN_OR_RETURN(
      s.universe, ParseUniverse(j.contains("attributes") ? j["attributes"] : Json()));

  const Json candidates = j.value("candidates", Json("all"));
  if (candidates.is_string() && candidates.get<std::string>() == "all") {
    s.adversary.candidates = s.universe.AllModels();
  } else if (candidates.is_array()) {
    for (const Json& c : candidates) {
      LINKRISK_ASSIGN_OR_RETURN(EntityModel m, ParseModel(s.universe, c));
      s.adversary.candidates.push_back(std::move(m));
    }
  } else {
    return Invalid("candidates must be \"all\" or a list of models");
  }

  if (!j.contains("profiles") || !j["profiles"].is_object() || j["profiles"].empty()) {
    return Invalid("profiles must be a nonempty object");
  }
  for (const auto& [name, model] : j["profiles"].items()) {
    LINKRISK_ASSIGN_OR_RETURN(EntityModel m, ParseModel(s.universe, model));
    s.profiles.emplace(name, std::move(m));
  }

  const Json prior = j.value("prior", Json("uniform"));
  for (const auto& [name, model] : s.profiles) {
    if (prior.is_string() && prior.get<std::string>() == "uniform") {
      s.adversary.prior.slices[name] = UniformSlice(s.adversary.candidates.size());
    } else if (prior.is_object() && prior.contains(name) && prior[name].is_array()) {
      BeliefSlice slice;
      for (const Json& x : prior[name]) {
        if (!x.is_number()) return Invalid("prior masses must be numbers");
        slice.push_back(x.get<double>());
      }
      s.adversary.prior.slices[name] = std::move(slice);
    } else {
      return Invalid(absl::StrCat("no prior for profile '", name, "'"));
    }
  }

  LINKRISK_ASSIGN_OR_RETURN(
      s.adversary.knowledge,
      ParseKnowledge(s, j.contains("kappa") ? j["kappa"] : Json()));
  LINKRISK_RETURN_IF_ERROR(s.adversary.Validate());

  const Json publication = j.value("publication", Json::object());
  if (!publication.is_object()) return Invalid("publication must be an object");
  for (const auto& [name, model] : s.profiles) {
    if (publication.contains(name)) {
      LINKRISK_ASSIGN_OR_RETURN(s.publication[name],
                                ParsePublication(s.universe, publication[name]));
    } else {
      s.publication[name] = PublicationConfig::Identity(s.universe);
    }
  }
  for (const auto& [name, config] : publication.items()) {
    if (!s.profiles.contains(name)) {
      return Invalid(absl::StrCat("publication for unknown profile '", name, "'"));
    }
  }

  const Json policy = j.value("policy", Json::array());
  if (!policy.is_array()) return Invalid("policy must be an array");
  for (const Json& r : policy) {
    if (!r.is_object() || !r.contains("profile") || !r["profile"].is_string() ||
        !r.contains("forbidden") || !r["forbidden"].is_object()) {
      return Invalid("requirements need a profile and forbidden values");
    }
    PrivacyRequirement req;
    req.profile = r["profile"].get<std::string>();
    if (!s.profiles.contains(req.profile)) {
      return Invalid(absl::StrCat("requirement on unknown profile '", req.profile, "'"));
    }
    for (const auto& [name, value] : r["forbidden"].items()) {
      LINKRISK_ASSIGN_OR_RETURN(std::size_t a, AttributeIndex(s.universe, name));
      if (!value.is_string()) return Invalid("forbidden values must be strings");
      LINKRISK_RETURN_IF_ERROR(CheckValue(s.universe, a, value.get<std::string>()));
      req.forbidden.emplace_back(a, value.get<std::string>());
    }
    if (req.forbidden.empty()) return Invalid("requirement forbids nothing");
    s.policy.requirements.push_back(std::move(req));
  }

  if (!j.contains("sigma") || !j["sigma"].is_number()) {
    return Invalid("sigma is required");
  }
  s.sigma = j["sigma"].get<double>();
  if (!(s.sigma >= 0.0 && s.sigma <= 1.0)) return Invalid("sigma must lie in [0, 1]");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) return Invalid("seed must be a nonnegative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("max_critical_size")) {
    if (!j["max_critical_size"].is_number_unsigned()) {
      return Invalid("max_critical_size must be a nonnegative integer");
    }
    s.max_critical_size = j["max_critical_size"].get<std::size_t>();
  }
  return s;
}

absl::StatusOr<std::string> RunScenario(const Scenario& s) {
  std::mt19937_64 rng(s.seed);
  Observation observation;
  for (const auto& [name, model] : s.profiles) {
    LINKRISK_ASSIGN_OR_RETURN(EntityModel published,
                              Publish(model, s.publication.at(name), rng));
    observation.emplace(name, std::move(published));
  }

  Json report = {{"sigma", s.sigma}, {"candidates", s.adversary.candidates.size()}};
  Json profiles = Json::object();
  bool satisfied = true;
  for (const auto& [name, published] : observation) {
    Json p = {{"published", ModelJson(s.universe, published)}};
    LINKRISK_ASSIGN_OR_RETURN(BeliefSlice posterior,
                              Posterior(s.adversary, observation, name));
    std::vector<std::size_t> order(posterior.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return posterior[a] > posterior[b];
    });
    Json masses = Json::array();
    for (std::size_t i : order) {
      if (posterior[i] <= 0.0) break;
      masses.push_back({{"model", ModelJson(s.universe, s.adversary.candidates[i])},
                        {"mass", posterior[i]}});
    }
    p["posterior"] = std::move(masses);

    Json requirements = Json::array();
    for (const PrivacyRequirement& r : s.policy.requirements) {
      if (r.profile != name) continue;
      Json forbidden = Json::array();
      for (const auto& [attr, value] : r.forbidden) {
        forbidden.push_back(
            {{"attribute", s.universe.name(attr)},
             {"value", value},
             {"mass", ValueMass(s.adversary.candidates, posterior, attr, value)}});
      }
      const bool ok = SigmaSatisfies(s.adversary.candidates, posterior, r, s.sigma);
      satisfied = satisfied && ok;
      requirements.push_back({{"forbidden", forbidden}, {"satisfied", ok}});
    }
    p["requirements"] = std::move(requirements);

    Json sensitive = Json::array();
    Json critical = Json::array();
    for (const AttributeSet& attrs :
         Subsets(published.Domain(), s.max_critical_size)) {
      if (IsSensitive(attrs, s.policy, name)) {
        sensitive.push_back(NamesJson(s.universe, attrs));
      }
      LINKRISK_ASSIGN_OR_RETURN(
          bool is_critical,
          IsCritical(attrs, name, published, s.adversary, s.policy, s.sigma));
      if (is_critical) critical.push_back(NamesJson(s.universe, attrs));
    }
    p["sensitive"] = std::move(sensitive);
    p["critical"] = std::move(critical);
    profiles[name] = std::move(p);
  }
  report["profiles"] = std::move(profiles);
  report["policy_satisfied"] = satisfied;
  return report.dump(2);
}

std::string ImpossibilityReportJson(const ImpossibilitySetup& setup,
                                    const ImpossibilityReport& report) {
  Json j = {{"sd", report.sd},
            {"profile", ModelJson(setup.universe, setup.profile)},
            {"preserved_attribute", setup.universe.name(setup.preserved_attr)},
            {"default_value", setup.default_value},
            {"original_posterior", report.original_posterior},
            {"modified_posterior", report.modified_posterior},
            {"transcript", report.transcript}};
  return j.dump(2);
}

}  // namespace linkrisk::framework
