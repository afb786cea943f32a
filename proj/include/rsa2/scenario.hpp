// Copyright 2026 The rsa2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSA2_SCENARIO_HPP_
#define RSA2_SCENARIO_HPP_

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/label_space.hpp"

namespace rsa2 {

// The four candidate-meaning roles of an interpretation scenario.
enum class MeaningRole { kLiteral, kNonLiteral, kOverlap, kNonSequitur };

std::string to_string(MeaningRole role);
MeaningRole meaning_role_from_string(const std::string& name);

enum class ScenarioSplit { kValidation, kTest };

std::string to_string(ScenarioSplit split);
ScenarioSplit scenario_split_from_string(const std::string& name);

struct ScenarioMeaning {
  std::string text;
  MeaningRole role;
};

// One interpretation record: a story context, a speaker's utterance and four
// role-tagged candidate meanings, exactly one per role. The intended role is
// either literal or nonliteral.
struct Scenario {
  std::string id;
  std::string context_text;
  std::string speaker_name;
  std::string utterance;
  std::array<ScenarioMeaning, 4> meanings;
  MeaningRole intended_role = MeaningRole::kNonLiteral;
  ScenarioSplit split = ScenarioSplit::kTest;

  const ScenarioMeaning& meaning_with_role(MeaningRole role) const;
  // The opposite of the intended role (literal <-> nonliteral).
  MeaningRole incorrect_role() const;
  // Meaning space over the four candidate texts, in file order.
  LabelSpacePtr meaning_space() const;
  // Generation prefix: the story up to the opening quotation mark.
  std::string generation_prefix() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scenario);

// JSON-lines loader with line-precise diagnostics.
std::vector<Scenario> load_scenarios(const std::string& path);
void save_scenarios(const std::vector<Scenario>& scenarios,
                    const std::string& path);

}  // namespace rsa2

#endif  // RSA2_SCENARIO_HPP_
