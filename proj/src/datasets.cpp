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

#include "rsa2/datasets.hpp"

#include <vector>

#include "rsa2/errors.hpp"

namespace rsa2 {

namespace {

const std::vector<std::string> kPriceLabels = {
    "50", "51", "500", "501", "1000", "1001", "5000", "5001", "10000", "10001"};

const std::vector<std::string> kWeatherStates = {"terrible", "bad", "ok",
                                                 "good", "amazing"};

}  // namespace

NumbersDataset NumbersDataset::standard() {
  NumbersDataset dataset;
  dataset.contexts = make_space(SpaceKind::kContext,
                                {"electric kettle", "laptop", "watch"});
  dataset.meanings = make_space(SpaceKind::kMeaning, kPriceLabels);
  dataset.utterances = make_space(SpaceKind::kUtterance, kPriceLabels);
  dataset.strategies = make_space(
      SpaceKind::kStrategy, {"literal", "hyperbole", "understatement", "halo"});
  return dataset;
}

StrategySet NumbersDataset::strategy_set() const {
  std::vector<RhetoricalFunction> functions;
  for (const auto& strategy : strategies->labels()) {
    functions.emplace_back(
        strategy, contexts, meanings, utterances,
        [strategy](const std::string&, const std::string& m,
                   const std::string& u) {
          return numbers_fr(strategy, std::stol(m), std::stol(u));
        });
  }
  return StrategySet(strategies, std::move(functions));
}

std::string NumbersDataset::utterance_text(const std::string& context,
                                           const std::string& price) const {
  contexts->index_of(context);
  utterances->index_of(price);
  return "The " + context + " costs " + price + " dollars.";
}

WeatherDataset WeatherDataset::standard() {
  WeatherDataset dataset;
  dataset.contexts = make_space(
      SpaceKind::kContext,
      {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"});
  dataset.states = make_space(SpaceKind::kMeaning, kWeatherStates);
  std::vector<std::string> utterances;
  utterances.reserve(kWeatherStates.size());
  for (const auto& state : kWeatherStates) {
    utterances.push_back("The weather is " + state + ".");
  }
  dataset.utterances = make_space(SpaceKind::kUtterance, std::move(utterances));
  dataset.arousal = make_space(SpaceKind::kAffectArousal, {"low", "high"});
  dataset.valence = make_space(SpaceKind::kAffectValence, {"neg", "pos"});
  dataset.strategies = make_space(SpaceKind::kStrategy, {"literal", "irony"});
  return dataset;
}

SemanticLexicon WeatherDataset::lexicon() const {
  return SemanticLexicon::identity(utterances, states);
}

const std::string& WeatherDataset::state_of_utterance(
    const std::string& utterance) const {
  return states->label(utterances->index_of(utterance));
}

StrategySet WeatherDataset::strategy_set() const {
  const auto state_count = states->size();
  const auto utterance_space = utterances;
  const auto state_space = states;

  auto literal = [state_space, utterance_space](
                     const std::string&, const std::string& m,
                     const std::string& u) {
    return state_space->index_of(m) == utterance_space->index_of(u) ? 1.0 : 0.0;
  };
  auto irony = [state_space, utterance_space, state_count](
                   const std::string&, const std::string& m,
                   const std::string& u) {
    const std::size_t mirrored = state_count - 1 - utterance_space->index_of(u);
    return state_space->index_of(m) == mirrored ? 1.0 : 0.0;
  };

  std::vector<RhetoricalFunction> functions;
  functions.emplace_back("literal", contexts, states, utterances, literal);
  functions.emplace_back("irony", contexts, states, utterances, irony);
  return StrategySet(strategies, std::move(functions));
}

}  // namespace rsa2
