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

#ifndef LINKRISK_FRAMEWORK_H_
#define LINKRISK_FRAMEWORK_H_

// Finite-universe model of what an adversary learns about profiles from
// their public attributes, and whether per-profile privacy requirements hold.

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace linkrisk::framework {

// An attribute value; std::nullopt is NULL.
using AttributeValue = std::optional<std::string>;
// Attribute indices into an AttributeUniverse.
using AttributeSet = std::set<std::size_t>;

class EntityModel;

// The declared attributes and their finite value domains.
class AttributeUniverse {
 public:
  AttributeUniverse() = default;

  static absl::StatusOr<AttributeUniverse> Create(
      std::vector<std::pair<std::string, std::vector<std::string>>> domains);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t attr) const { return names_[attr]; }
  const std::vector<std::string>& domain(std::size_t attr) const {
    return domains_[attr];
  }
  absl::StatusOr<std::size_t> Index(std::string_view name) const;

  // Every model over the universe: each attribute NULL or a domain value.
  std::vector<EntityModel> AllModels() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> domains_;
};

// Attribute values of one entity, one slot per universe attribute.
class EntityModel {
 public:
  EntityModel() = default;
  explicit EntityModel(std::size_t attributes) : values_(attributes) {}
  explicit EntityModel(std::vector<AttributeValue> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  const AttributeValue& value(std::size_t attr) const { return values_[attr]; }
  void set(std::size_t attr, AttributeValue v) { values_[attr] = std::move(v); }
  const std::vector<AttributeValue>& values() const { return values_; }

  // Attributes with a non-NULL value.
  AttributeSet Domain() const;

  std::string DebugString(const AttributeUniverse& universe) const;

  auto operator<=>(const EntityModel&) const = default;
  bool operator==(const EntityModel&) const = default;

 private:
  std::vector<AttributeValue> values_;
};

// The profile models of one user.
struct UserModel {
  std::vector<EntityModel> profiles;
};

// Keeps `attrs`, NULLs everything else. `attrs` must be nonempty.
absl::StatusOr<EntityModel> Restrict(const EntityModel& model,
                                     const AttributeSet& attrs);

// A publication function: publishes `selected` attributes, replacing each
// attribute in `perturb` with a value drawn uniformly from its list. At least
// one selected attribute must stay unperturbed.
struct PublicationConfig {
  AttributeSet selected;
  std::map<std::size_t, std::vector<std::string>> perturb;

  static PublicationConfig Identity(const AttributeUniverse& universe);
  absl::Status Validate(std::size_t universe_size) const;
};

absl::StatusOr<EntityModel> Publish(const EntityModel& model,
                                    const PublicationConfig& config,
                                    std::mt19937_64& rng);

// Published (restricted) models keyed by profile.
using Observation = std::map<std::string, EntityModel>;

// Probability mass over an adversary's candidate models.
using BeliefSlice = std::vector<double>;

// Per-profile beliefs.
struct Belief {
  std::map<std::string, BeliefSlice> slices;
};

// Likelihood Pr[observed | candidate] in [0, 1].
using WorldKnowledge = std::function<double(const EntityModel& observed,
                                            const EntityModel& candidate)>;

// No inference rules: the observed restricted model is taken at face value,
// so only the candidate equal to it explains the observation.
WorldKnowledge EmptyWorldKnowledge();
// Deterministic rule: a candidate explains the observation iff it agrees on
// every observed non-NULL attribute.
WorldKnowledge ConsistencyKnowledge();
// Explicit likelihood rows for listed observations (one entry per candidate),
// falling back to `fallback` for anything else.
WorldKnowledge TableKnowledge(std::map<EntityModel, std::vector<double>> rows,
                              std::vector<EntityModel> candidates,
                              WorldKnowledge fallback);

struct Adversary {
  std::vector<EntityModel> candidates;
  Belief prior;
  WorldKnowledge knowledge;

  absl::Status Validate() const;
};

BeliefSlice UniformSlice(std::size_t candidates);

// Bayes update of one prior slice on one observed model.
absl::StatusOr<BeliefSlice> UpdateBelief(const Adversary& adversary,
                                         const BeliefSlice& prior,
                                         const EntityModel& observed);

// The a-posteriori belief about `profile` after `observation`.
absl::StatusOr<BeliefSlice> Posterior(const Adversary& adversary,
                                      const Observation& observation,
                                      std::string_view profile);

// r = (profile, {attr_i = x_i}): the profile should not expose these values.
struct PrivacyRequirement {
  std::string profile;
  std::vector<std::pair<std::size_t, std::string>> forbidden;
};

struct PrivacyPolicy {
  std::vector<PrivacyRequirement> requirements;
};

// Posterior mass of candidates with model(attr) == value.
double ValueMass(std::span<const EntityModel> candidates,
                 const BeliefSlice& posterior, std::size_t attr,
                 std::string_view value);

// Each forbidden value keeps posterior mass <= sigma (per attribute).
bool SigmaSatisfies(std::span<const EntityModel> candidates,
                    const BeliefSlice& posterior,
                    const PrivacyRequirement& requirement, double sigma);

// Every requirement holds against the posterior of its profile.
absl::StatusOr<bool> PolicySatisfied(const Adversary& adversary,
                                     const Observation& observation,
                                     const PrivacyPolicy& policy, double sigma);

// `attrs` is covered by the attribute set of some requirement on `profile`.
bool IsSensitive(const AttributeSet& attrs, const PrivacyPolicy& policy,
                 std::string_view profile);

// True iff some requirement on `profile` is sigma-violated when `published`
// is observed but sigma-satisfied once `attrs` are withheld from it.
// Requires attrs to lie inside the published domain.
absl::StatusOr<bool> IsCritical(const AttributeSet& attrs,
                                std::string_view profile,
                                const EntityModel& published,
                                const Adversary& adversary,
                                const PrivacyPolicy& policy, double sigma);

// Total variation distance, 1/2 of the L1 distance. Missing entries are 0.
double TotalVariation(std::span<const double> x, std::span<const double> y);
double TotalVariation(const std::map<std::string, double>& x,
                      const std::map<std::string, double>& y);

// Adversary with uniform prior and empty world knowledge observes a profile
// through a publication function that keeps one attribute. The same is run
// with that attribute swapped for a default value; the two posteriors are
// compared by total variation distance.
struct ImpossibilitySetup {
  AttributeUniverse universe;
  EntityModel profile;
  std::size_t preserved_attr = 0;
  std::string default_value;
};

struct ImpossibilityReport {
  double sd = 0.0;
  BeliefSlice original_posterior;
  BeliefSlice modified_posterior;
  std::vector<std::string> transcript;
};

ImpossibilitySetup DefaultImpossibilitySetup();
absl::StatusOr<ImpossibilityReport> RunImpossibility(
    const ImpossibilitySetup& setup);

}  // namespace linkrisk::framework

#endif  // LINKRISK_FRAMEWORK_H_
