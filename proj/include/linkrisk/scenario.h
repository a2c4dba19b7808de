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

#ifndef LINKRISK_SCENARIO_H_
#define LINKRISK_SCENARIO_H_

// JSON scenario files for the privacy framework.
//
//   {
//     "attributes": [{"name": "city", "values": ["berlin", "paris"]}, ...],
//     "candidates": "all" | [{"city": "berlin", "name": null}, ...],
//     "profiles": {"P": {"city": "berlin", ...}},
//     "prior": "uniform" | {"P": [0.25, ...]},
//     "kappa": {"type": "empty" | "consistency" | "table",
//               "rows": [{"observed": {...}, "likelihoods": [...]}],
//               "fallback": "empty" | "consistency" | "zero"},
//     "publication": {"P": {"select": ["city"], "perturb": {"name": [...]}}},
//     "policy": [{"profile": "P", "forbidden": {"city": "berlin"}}],
//     "sigma": 0.5,
//     "seed": 0,
//     "max_critical_size": 3
//   }
//
// "attributes" may also be an object from name to values (names then sort
// alphabetically). Absent attributes in a model are NULL. Profiles without a
// publication entry publish every attribute unchanged.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "linkrisk/framework.h"

namespace linkrisk::framework {

struct Scenario {
  AttributeUniverse universe;
  std::map<std::string, EntityModel> profiles;
  std::map<std::string, PublicationConfig> publication;
  Adversary adversary;
  PrivacyPolicy policy;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_critical_size = 3;
};

absl::StatusOr<Scenario> ParseScenario(std::string_view json_text);

// Publishes every profile, updates the adversary's beliefs and evaluates the
// policy. Returns a JSON report.
absl::StatusOr<std::string> RunScenario(const Scenario& scenario);

// JSON transcript of RunImpossibility.
std::string ImpossibilityReportJson(const ImpossibilitySetup& setup,
                                    const ImpossibilityReport& report);

}  // namespace linkrisk::framework

#endif  // LINKRISK_SCENARIO_H_
