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

#ifndef RSA2_DATASETS_HPP_
#define RSA2_DATASETS_HPP_

#include <string>

#include "rsa2/label_space.hpp"
#include "rsa2/lexicon.hpp"
#include "rsa2/rhetorical.hpp"

namespace rsa2 {

// The non-literal price-expression setting: three objects, ten prices (used
// for both meanings and utterances) and four rhetorical strategies backed by
// the numbers_fr case function.
struct NumbersDataset {
  LabelSpacePtr contexts;
  LabelSpacePtr meanings;
  LabelSpacePtr utterances;
  LabelSpacePtr strategies;

  static NumbersDataset standard();

  StrategySet strategy_set() const;
  // Display form "The <context> costs <price> dollars."
  std::string utterance_text(const std::string& context,
                             const std::string& price) const;
};

// The ironic weather setting: nine visual contexts, a five-point state scale
// doubling as the utterance vocabulary, binary affect dimensions and the
// literal/irony strategy pair. The irony function mirrors the utterance's
// literal state on the ordered scale (terrible <-> amazing, bad <-> good,
// ok <-> ok).
struct WeatherDataset {
  LabelSpacePtr contexts;
  LabelSpacePtr states;
  LabelSpacePtr utterances;
  LabelSpacePtr arousal;
  LabelSpacePtr valence;
  LabelSpacePtr strategies;

  static WeatherDataset standard();

  SemanticLexicon lexicon() const;
  StrategySet strategy_set() const;
  const std::string& state_of_utterance(const std::string& utterance) const;
};

}  // namespace rsa2

#endif  // RSA2_DATASETS_HPP_
