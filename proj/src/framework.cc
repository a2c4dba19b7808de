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

#include "linkrisk/framework.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace linkrisk::framework {
namespace {

constexpr double kMassTolerance = 1e-12;

absl::Status CheckSlice(const BeliefSlice& slice, std::size_t candidates) {
  if (slice.size() != candidates) {
    return absl::InvalidArgumentError(absl::StrCat(
        "belief has ", slice.size(), " entries for ", candidates, " candidates"));
  }
  double sum = 0.0;
  for (double p : slice) {
    if (!(p >= 0.0)) return absl::InvalidArgumentError("negative belief mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(absl::StrCat("belief sums to ", sum));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<AttributeUniverse> AttributeUniverse::Create(
    std::vector<std::pair<std::string, std::vector<std::string>>> domains) {
  AttributeUniverse universe;
  std::set<std::string> seen;
  for (auto& [name, values] : domains) {
    if (name.empty()) return absl::InvalidArgumentError("empty attribute name");
    if (!seen.insert(name).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate attribute '", name, "'"));
    }
    std::set<std::string> unique(values.begin(), values.end());
    if (unique.size() != values.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate value in domain of '", name, "'"));
    }
    universe.names_.push_back(std::move(name));
    universe.domains_.push_back(std::move(values));
  }
  return universe;
}

absl::StatusOr<std::size_t> AttributeUniverse::Index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return absl::NotFoundError(absl::StrCat("unknown attribute '", std::string(name), "'"));
}

std::vector<EntityModel> AttributeUniverse::AllModels() const {
  std::vector<EntityModel> models = {EntityModel(size())};
  for (std::size_t a = 0; a < size(); ++a) {
    std::vector<EntityModel> next;
    next.reserve(models.size() * (domains_[a].size() + 1));
    for (const EntityModel& m : models) {
      next.push_back(m);
      for (const std::string& v : domains_[a]) {
        EntityModel with = m;
        with.set(a, v);
        next.push_back(std::move(with));
      }
    }
    models = std::move(next);
  }
  return models;
}

AttributeSet EntityModel::Domain() const {
  AttributeSet domain;
  for (std::size_t a = 0; a < values_.size(); ++a) {
    if (values_[a].has_value()) domain.insert(a);
  }
  return domain;
}

std::string EntityModel::DebugString(const AttributeUniverse& universe) const {
  std::vector<std::string> parts;
  for (std::size_t a = 0; a < values_.size(); ++a) {
    const std::string name = a < universe.size() ? universe.name(a) : absl::StrCat("#", a);
    parts.push_back(absl::StrCat(name, "=", values_[a].value_or("NULL")));
  }
  return absl::StrCat("{", absl::StrJoin(parts, ", "), "}");
}

absl::StatusOr<EntityModel> Restrict(const EntityModel& model,
                                     const AttributeSet& attrs) {
  if (attrs.empty()) {
    return absl::InvalidArgumentError("restriction needs a nonempty attribute set");
  }
  EntityModel out(model.size());
  for (std::size_t a : attrs) {
    if (a >= model.size()) {
      return absl::InvalidArgumentError(absl::StrCat("attribute ", a, " out of range"));
    }
    out.set(a, model.value(a));
  }
  return out;
}

PublicationConfig PublicationConfig::Identity(const AttributeUniverse& universe) {
  PublicationConfig config;
  for (std::size_t a = 0; a < universe.size(); ++a) config.selected.insert(a);
  return config;
}

absl::Status PublicationConfig::Validate(std::size_t universe_size) const {
  if (selected.empty()) {
    return absl::InvalidArgumentError("publication selects no attributes");
  }
  bool keeps_one = false;
  for (std::size_t a : selected) {
    if (a >= universe_size) {
      return absl::InvalidArgumentError(absl::StrCat("attribute ", a, " out of range"));
    }
    keeps_one = keeps_one || !perturb.contains(a);
  }
  for (const auto& [a, replacements] : perturb) {
    if (!selected.contains(a)) {
      return absl::InvalidArgumentError("perturbed attribute is not published");
    }
    if (replacements.empty()) {
      return absl::InvalidArgumentError("perturbation has no replacement values");
    }
  }
  if (!keeps_one) {
    return absl::InvalidArgumentError(
        "publication must keep at least one attribute unperturbed");
  }
  return absl::OkStatus();
}

absl::StatusOr<EntityModel> Publish(const EntityModel& model,
                                    const PublicationConfig& config,
                                    std::mt19937_64& rng) {
  if (absl::Status s = config.Validate(model.size()); !s.ok()) return s;
  absl::StatusOr<EntityModel> out = Restrict(model, config.selected);
  if (!out.ok()) return out.status();
  for (const auto& [a, replacements] : config.perturb) {
    out->set(a, replacements[rng() % replacements.size()]);
  }
  return out;
}

WorldKnowledge EmptyWorldKnowledge() {
  return [](const EntityModel& observed, const EntityModel& candidate) {
    return observed == candidate ? 1.0 : 0.0;
  };
}

WorldKnowledge ConsistencyKnowledge() {
  return [](const EntityModel& observed, const EntityModel& candidate) {
    for (std::size_t a = 0; a < observed.size(); ++a) {
      if (observed.value(a).has_value() &&
          (a >= candidate.size() || candidate.value(a) != observed.value(a))) {
        return 0.0;
      }
    }
    return 1.0;
  };
}

WorldKnowledge TableKnowledge(std::map<EntityModel, std::vector<double>> rows,
                              std::vector<EntityModel> candidates,
                              WorldKnowledge fallback) {
  std::map<EntityModel, std::size_t> index;
  for (std::size_t i = 0; i < candidates.size(); ++i) index.emplace(candidates[i], i);
  return [rows = std::move(rows), index = std::move(index),
          fallback = std::move(fallback)](const EntityModel& observed,
                                          const EntityModel& candidate) {
    const auto row = rows.find(observed);
    const auto col = index.find(candidate);
    if (row != rows.end() && col != index.end() &&
        col->second < row->second.size()) {
      return row->second[col->second];
    }
    return fallback(observed, candidate);
  };
}

absl::Status Adversary::Validate() const {
  if (candidates.empty()) return absl::InvalidArgumentError("no candidate models");
  if (!knowledge) return absl::InvalidArgumentError("no world knowledge");
  for (const auto& [profile, slice] : prior.slices) {
    if (absl::Status s = CheckSlice(slice, candidates.size()); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("prior of '", profile, "': ", s.message()));
    }
  }
  return absl::OkStatus();
}

BeliefSlice UniformSlice(std::size_t candidates) {
  return BeliefSlice(candidates, 1.0 / static_cast<double>(candidates));
}

absl::StatusOr<BeliefSlice> UpdateBelief(const Adversary& adversary,
                                         const BeliefSlice& prior,
                                         const EntityModel& observed) {
  if (absl::Status s = CheckSlice(prior, adversary.candidates.size()); !s.ok()) {
    return s;
  }
  BeliefSlice posterior(prior.size(), 0.0);
  double evidence = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] == 0.0) continue;
    const double likelihood =
        adversary.knowledge(observed, adversary.candidates[i]);
    if (!(likelihood >= 0.0 && likelihood <= 1.0)) {
      return absl::InvalidArgumentError("likelihood outside [0, 1]");
    }
    posterior[i] = likelihood * prior[i];
    evidence += posterior[i];
  }
  if (!(evidence > 0.0)) {
    return absl::FailedPreconditionError("observation impossible under prior");
  }
  for (double& p : posterior) p /= evidence;
  return posterior;
}

absl::StatusOr<BeliefSlice> Posterior(const Adversary& adversary,
                                      const Observation& observation,
                                      std::string_view profile) {
  const auto prior = adversary.prior.slices.find(std::string(profile));
  if (prior == adversary.prior.slices.end()) {
    return absl::NotFoundError(absl::StrCat("no prior for '", std::string(profile), "'"));
  }
  const auto observed = observation.find(std::string(profile));
  if (observed == observation.end()) {
    return absl::NotFoundError(absl::StrCat("'", std::string(profile), "' is not observed"));
  }
  return UpdateBelief(adversary, prior->second, observed->second);
}

double ValueMass(std::span<const EntityModel> candidates,
                 const BeliefSlice& posterior, std::size_t attr,
                 std::string_view value) {
  double mass = 0.0;
  for (std::size_t i = 0; i < candidates.size() && i < posterior.size(); ++i) {
    const AttributeValue& v = candidates[i].value(attr);
    if (v.has_value() && *v == value) mass += posterior[i];
  }
  return mass;
}

bool SigmaSatisfies(std::span<const EntityModel> candidates,
                    const BeliefSlice& posterior,
                    const PrivacyRequirement& requirement, double sigma) {
  for (const auto& [attr, value] : requirement.forbidden) {
    if (ValueMass(candidates, posterior, attr, value) > sigma) return false;
  }
  return true;
}

absl::StatusOr<bool> PolicySatisfied(const Adversary& adversary,
                                     const Observation& observation,
                                     const PrivacyPolicy& policy, double sigma) {
  for (const PrivacyRequirement& r : policy.requirements) {
    absl::StatusOr<BeliefSlice> posterior =
        Posterior(adversary, observation, r.profile);
    if (!posterior.ok()) return posterior.status();
    if (!SigmaSatisfies(adversary.candidates, *posterior, r, sigma)) return false;
  }
  return true;
}

bool IsSensitive(const AttributeSet& attrs, const PrivacyPolicy& policy,
                 std::string_view profile) {
  for (const PrivacyRequirement& r : policy.requirements) {
    if (r.profile != profile) continue;
    AttributeSet covered;
    for (const auto& [attr, value] : r.forbidden) covered.insert(attr);
    if (std::includes(covered.begin(), covered.end(), attrs.begin(), attrs.end())) {
      return true;
    }
  }
  return false;
}

absl::StatusOr<bool> IsCritical(const AttributeSet& attrs,
                                std::string_view profile,
                                const EntityModel& published,
                                const Adversary& adversary,
                                const PrivacyPolicy& policy, double sigma) {
  const AttributeSet domain = published.Domain();
  if (!std::includes(domain.begin(), domain.end(), attrs.begin(), attrs.end())) {
    return absl::FailedPreconditionError(
        "critical attributes must lie in the published domain");
  }
  const auto prior = adversary.prior.slices.find(std::string(profile));
  if (prior == adversary.prior.slices.end()) {
    return absl::NotFoundError(absl::StrCat("no prior for '", std::string(profile), "'"));
  }
  EntityModel withheld = published;
  for (std::size_t a : attrs) withheld.set(a, std::nullopt);

  std::optional<BeliefSlice> with;
  std::optional<BeliefSlice> without;
  for (const PrivacyRequirement& r : policy.requirements) {
    if (r.profile != profile) continue;
    if (!with) {
      absl::StatusOr<BeliefSlice> p = UpdateBelief(adversary, prior->second, published);
      if (!p.ok()) return p.status();
      absl::StatusOr<BeliefSlice> q = UpdateBelief(adversary, prior->second, withheld);
      if (!q.ok()) return q.status();
      with = *std::move(p);
      without = *std::move(q);
    }
    if (!SigmaSatisfies(adversary.candidates, *with, r, sigma) &&
        SigmaSatisfies(adversary.candidates, *without, r, sigma)) {
      return true;
    }
  }
  return false;
}

double TotalVariation(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::max(x.size(), y.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < x.size() ? x[i] : 0.0;
    const double b = i < y.size() ? y[i] : 0.0;
    l1 += std::abs(a - b);
  }
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

double TotalVariation(const std::map<std::string, double>& x,
                      const std::map<std::string, double>& y) {
  std::set<std::string> support;
  for (const auto& [k, v] : x) support.insert(k);
  for (const auto& [k, v] : y) support.insert(k);
  double l1 = 0.0;
  for (const std::string& k : support) {
    const auto a = x.find(k);
    const auto b = y.find(k);
    l1 += std::abs((a == x.end() ? 0.0 : a->second) -
                   (b == y.end() ? 0.0 : b->second));
  }
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

ImpossibilitySetup DefaultImpossibilitySetup() {
  ImpossibilitySetup setup;
  setup.universe = *AttributeUniverse::Create({
      {"name", {"bob", "alice"}},
      {"city", {"saarbruecken", "berlin"}},
      {"employer", {"acme", "initech"}},
  });
  setup.profile = EntityModel(std::vector<AttributeValue>{
      std::string("bob"), std::string("saarbruecken"), std::string("acme")});
  setup.preserved_attr = 1;
  setup.default_value = "berlin";
  return setup;
}

absl::StatusOr<ImpossibilityReport> RunImpossibility(
    const ImpossibilitySetup& setup) {
  const AttributeUniverse& universe = setup.universe;
  const std::size_t alpha = setup.preserved_attr;
  if (setup.profile.size() != universe.size() || alpha >= universe.size()) {
    return absl::InvalidArgumentError("profile does not fit the universe");
  }
  ImpossibilityReport report;
  auto say = [&report](auto&&... parts) {
    report.transcript.push_back(absl::StrCat(parts...));
  };

  Adversary adversary;
  adversary.candidates = universe.AllModels();
  adversary.knowledge = EmptyWorldKnowledge();
  const BeliefSlice prior = UniformSlice(adversary.candidates.size());
  say("adversary: uniform prior over ", adversary.candidates.size(),
      " candidate models, empty world knowledge");

  PublicationConfig publication;
  publication.selected = {alpha};
  std::mt19937_64 rng(0);

  EntityModel modified = setup.profile;
  modified.set(alpha, setup.default_value);
  say("profile model ", setup.profile.DebugString(universe));
  say("modified model ", modified.DebugString(universe), " (", universe.name(alpha),
      ": ", setup.profile.value(alpha).value_or("NULL"), " -> ",
      setup.default_value, ")");

  absl::StatusOr<EntityModel> observed = Publish(setup.profile, publication, rng);
  if (!observed.ok()) return observed.status();
  absl::StatusOr<EntityModel> observed_mod = Publish(modified, publication, rng);
  if (!observed_mod.ok()) return observed_mod.status();
  say("publication keeps only ", universe.name(alpha), ": observed ",
      observed->DebugString(universe), " vs ", observed_mod->DebugString(universe));

  absl::StatusOr<BeliefSlice> original = UpdateBelief(adversary, prior, *observed);
  if (!original.ok()) return original.status();
  absl::StatusOr<BeliefSlice> changed = UpdateBelief(adversary, prior, *observed_mod);
  if (!changed.ok()) return changed.status();
  report.original_posterior = *std::move(original);
  report.modified_posterior = *std::move(changed);

  auto describe = [&](const BeliefSlice& slice) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      if (slice[i] > 0.0) {
        parts.push_back(absl::StrCat(
            adversary.candidates[i].DebugString(universe), ": ", slice[i]));
      }
    }
    return absl::StrJoin(parts, "; ");
  };
  say("posterior (original): ", describe(report.original_posterior));
  say("posterior (modified): ", describe(report.modified_posterior));
  report.sd = TotalVariation(report.original_posterior, report.modified_posterior);
  say("SD = ", report.sd);
  return report;
}

}  // namespace linkrisk::framework
