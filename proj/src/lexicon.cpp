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

#include "rsa2/lexicon.hpp"

#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"

namespace rsa2 {

SemanticLexicon::SemanticLexicon(
    LabelSpacePtr utterances, LabelSpacePtr meanings,
    std::map<std::string, std::set<std::string>> denotation)
    : utterances_(std::move(utterances)),
      meanings_(std::move(meanings)),
      denotation_(std::move(denotation)) {
  bool any_nonempty = false;
  for (const auto& utterance : utterances_->labels()) {
    auto it = denotation_.find(utterance);
    if (it == denotation_.end()) {
      throw DataError("lexicon is missing utterance \"" + utterance + "\"");
    }
    for (const auto& meaning : it->second) {
      if (!meanings_->contains(meaning)) {
        throw DataError("denotation of \"" + utterance +
                        "\" mentions unknown meaning \"" + meaning + "\"");
      }
    }
    any_nonempty = any_nonempty || !it->second.empty();
  }
  if (denotation_.size() != utterances_->size()) {
    throw DataError("lexicon has entries for utterances outside the space");
  }
  if (!any_nonempty) {
    throw DataError("lexicon must have at least one non-empty denotation");
  }
}

SemanticLexicon SemanticLexicon::identity(LabelSpacePtr utterances,
                                          LabelSpacePtr meanings) {
  if (utterances->size() != meanings->size()) {
    throw DataError("identity lexicon requires equal-size spaces");
  }
  std::map<std::string, std::set<std::string>> denotation;
  for (std::size_t i = 0; i < utterances->size(); ++i) {
    denotation[utterances->label(i)] = {meanings->label(i)};
  }
  return SemanticLexicon(std::move(utterances), std::move(meanings),
                         std::move(denotation));
}

bool SemanticLexicon::compatible(const std::string& meaning,
                                 const std::string& utterance) const {
  return denotation(utterance).count(meaning) > 0;
}

const std::set<std::string>& SemanticLexicon::denotation(
    const std::string& utterance) const {
  auto it = denotation_.find(utterance);
  if (it == denotation_.end()) {
    throw LabelOutOfSpaceError("utterance \"" + utterance +
                               "\" not in lexicon");
  }
  return it->second;
}

SemanticLexicon SemanticLexicon::from_json(const nlohmann::json& j,
                                           const LabelSpacePtr& utterances,
                                           const LabelSpacePtr& meanings) {
  if (!j.is_object() || !j.contains("denotation")) {
    throw DataError("lexicon JSON must have a \"denotation\" object");
  }
  std::map<std::string, std::set<std::string>> denotation;
  for (const auto& [utterance, meanings_json] : j.at("denotation").items()) {
    if (!utterances->contains(utterance)) {
      throw DataError("lexicon mentions unknown utterance \"" + utterance +
                      "\"");
    }
    std::set<std::string> set;
    for (const auto& m : meanings_json) {
      set.insert(m.get<std::string>());
    }
    denotation.emplace(utterance, std::move(set));
  }
  return SemanticLexicon(utterances, meanings, std::move(denotation));
}

nlohmann::json SemanticLexicon::to_json() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [utterance, meanings] : denotation_) {
    entries[utterance] = meanings;
  }
  return nlohmann::json{{"denotation", std::move(entries)}};
}

}  // namespace rsa2
