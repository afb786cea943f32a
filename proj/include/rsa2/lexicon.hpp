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

#ifndef RSA2_LEXICON_HPP_
#define RSA2_LEXICON_HPP_

#include <map>
#include <set>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/label_space.hpp"

namespace rsa2 {

// The shared semantic understanding function: maps each utterance to the set
// of meanings that are literally compatible with it. Every utterance in the
// utterance space must have an entry (which may be empty), and at least one
// denotation must be non-empty.
class SemanticLexicon {
 public:
  SemanticLexicon(LabelSpacePtr utterances, LabelSpacePtr meanings,
                  std::map<std::string, std::set<std::string>> denotation);

  // Singleton denotations pairing each utterance label with the meaning label
  // at the same index. Requires equal-size spaces.
  static SemanticLexicon identity(LabelSpacePtr utterances,
                                  LabelSpacePtr meanings);

  const LabelSpacePtr& utterances() const { return utterances_; }
  const LabelSpacePtr& meanings() const { return meanings_; }

  bool compatible(const std::string& meaning, const std::string& utterance) const;
  const std::set<std::string>& denotation(const std::string& utterance) const;

  // JSON schema: {"denotation": {"<utterance>": ["<meaning>", ...], ...}}
  static SemanticLexicon from_json(const nlohmann::json& j,
                                   const LabelSpacePtr& utterances,
                                   const LabelSpacePtr& meanings);
  nlohmann::json to_json() const;

 private:
  LabelSpacePtr utterances_;
  LabelSpacePtr meanings_;
  std::map<std::string, std::set<std::string>> denotation_;
};

}  // namespace rsa2

#endif  // RSA2_LEXICON_HPP_
