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

#include "rsa2/scenario.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"

namespace rsa2 {

std::string to_string(MeaningRole role) {
  switch (role) {
    case MeaningRole::kLiteral:
      return "literal";
    case MeaningRole::kNonLiteral:
      return "nonliteral";
    case MeaningRole::kOverlap:
      return "overlap";
    case MeaningRole::kNonSequitur:
      return "nonsequitur";
  }
  return "unknown";
}

MeaningRole meaning_role_from_string(const std::string& name) {
  if (name == "literal") return MeaningRole::kLiteral;
  if (name == "nonliteral") return MeaningRole::kNonLiteral;
  if (name == "overlap") return MeaningRole::kOverlap;
  if (name == "nonsequitur") return MeaningRole::kNonSequitur;
  throw DataError("unknown meaning role \"" + name + "\"");
}

std::string to_string(ScenarioSplit split) {
  return split == ScenarioSplit::kValidation ? "validation" : "test";
}

ScenarioSplit scenario_split_from_string(const std::string& name) {
  if (name == "validation") return ScenarioSplit::kValidation;
  if (name == "test") return ScenarioSplit::kTest;
  throw DataError("unknown split \"" + name + "\"");
}

const ScenarioMeaning& Scenario::meaning_with_role(MeaningRole role) const {
  for (const auto& meaning : meanings) {
    if (meaning.role == role) return meaning;
  }
  throw DataError("scenario " + id + " has no meaning with role " +
                  to_string(role));
}

MeaningRole Scenario::incorrect_role() const {
  return intended_role == MeaningRole::kLiteral ? MeaningRole::kNonLiteral
                                                : MeaningRole::kLiteral;
}

LabelSpacePtr Scenario::meaning_space() const {
  std::vector<std::string> labels;
  labels.reserve(meanings.size());
  for (const auto& meaning : meanings) labels.push_back(meaning.text);
  return make_space(SpaceKind::kMeaning, std::move(labels));
}

std::string Scenario::generation_prefix() const {
  return context_text + " " + speaker_name + " said, \"";
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario scenario;
  scenario.id = j.at("id").get<std::string>();
  scenario.context_text = j.at("context_text").get<std::string>();
  scenario.speaker_name = j.at("speaker_name").get<std::string>();
  scenario.utterance = j.at("utterance").get<std::string>();

  const auto& meanings = j.at("meanings");
  if (!meanings.is_array() || meanings.size() != 4) {
    throw DataError("scenario " + scenario.id +
                    ": \"meanings\" must list exactly four entries");
  }
  std::set<MeaningRole> seen;
  std::set<std::string> texts;
  for (std::size_t i = 0; i < 4; ++i) {
    scenario.meanings[i].text = meanings.at(i).at("text").get<std::string>();
    scenario.meanings[i].role = meaning_role_from_string(
        meanings.at(i).at("role").get<std::string>());
    if (!seen.insert(scenario.meanings[i].role).second) {
      throw DataError("scenario " + scenario.id + ": duplicate role \"" +
                      to_string(scenario.meanings[i].role) + "\"");
    }
    if (!texts.insert(scenario.meanings[i].text).second) {
      throw DataError("scenario " + scenario.id +
                      ": duplicate meaning text \"" +
                      scenario.meanings[i].text + "\"");
    }
  }

  scenario.intended_role =
      meaning_role_from_string(j.at("intended_role").get<std::string>());
  if (scenario.intended_role != MeaningRole::kLiteral &&
      scenario.intended_role != MeaningRole::kNonLiteral) {
    throw DataError("scenario " + scenario.id +
                    ": intended_role must be literal or nonliteral");
  }
  scenario.split =
      scenario_split_from_string(j.at("split").get<std::string>());
  return scenario;
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
  nlohmann::json meanings = nlohmann::json::array();
  for (const auto& meaning : scenario.meanings) {
    meanings.push_back(
        {{"text", meaning.text}, {"role", to_string(meaning.role)}});
  }
  return nlohmann::json{{"id", scenario.id},
                        {"context_text", scenario.context_text},
                        {"speaker_name", scenario.speaker_name},
                        {"utterance", scenario.utterance},
                        {"meanings", std::move(meanings)},
                        {"intended_role", to_string(scenario.intended_role)},
                        {"split", to_string(scenario.split)}};
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open scenario file " + path);
  }
  std::vector<Scenario> scenarios;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      scenarios.push_back(scenario_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_number) + ": " +
                      e.what());
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_number) + ": " +
                      e.what());
    }
    if (!ids.insert(scenarios.back().id).second) {
      throw DataError(path + ":" + std::to_string(line_number) +
                      ": duplicate scenario id \"" + scenarios.back().id +
                      "\"");
    }
  }
  if (scenarios.empty()) {
    throw DataError("scenario file " + path + " is empty");
  }
  return scenarios;
}

void save_scenarios(const std::vector<Scenario>& scenarios,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write scenario file " + path);
  }
  for (const auto& scenario : scenarios) {
    out << scenario_to_json(scenario).dump() << "\n";
  }
}

}  // namespace rsa2
