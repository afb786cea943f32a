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

// Test-only random instance generators shared by the unit and acceptance
// suites. Independent of the inference code they exercise.

#ifndef RSA2_TESTS_INSTANCE_FUZZ_HPP_
#define RSA2_TESTS_INSTANCE_FUZZ_HPP_

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rsa2/categorical.hpp"
#include "rsa2/label_space.hpp"
#include "rsa2/lexicon.hpp"
#include "rsa2/rng.hpp"

namespace rsa2::testing {

struct FuzzInstance {
  LabelSpacePtr meanings;
  LabelSpacePtr utterances;
  SemanticLexicon lexicon;
  Categorical meaning_prior;
  Categorical utterance_prior;
  double alpha;
};

// Random finite instance: 2..max_m meanings, 2..max_u utterances, non-empty
// random denotations, strictly positive priors, alpha in (0, 5].
inline FuzzInstance random_instance(std::mt19937_64& rng, std::size_t max_m = 8,
                                    std::size_t max_u = 8) {
  const std::size_t num_m = 2 + uniform_below(rng, max_m - 1);
  const std::size_t num_u = 2 + uniform_below(rng, max_u - 1);
  std::vector<std::string> meaning_labels;
  std::vector<std::string> utterance_labels;
  for (std::size_t m = 0; m < num_m; ++m) {
    meaning_labels.push_back("m" + std::to_string(m));
  }
  for (std::size_t u = 0; u < num_u; ++u) {
    utterance_labels.push_back("u" + std::to_string(u));
  }
  auto meanings = make_space(SpaceKind::kMeaning, meaning_labels);
  auto utterances = make_space(SpaceKind::kUtterance, utterance_labels);

  std::map<std::string, std::set<std::string>> denotation;
  for (const auto& u : utterance_labels) {
    std::set<std::string> denoted;
    denoted.insert(meaning_labels[uniform_below(rng, num_m)]);
    for (const auto& m : meaning_labels) {
      if (uniform_unit(rng) < 0.4) denoted.insert(m);
    }
    denotation[u] = denoted;
  }
  SemanticLexicon lexicon(utterances, meanings, denotation);

  auto positive_dist = [&](const LabelSpacePtr& space) {
    std::vector<double> weights(space->size());
    for (double& w : weights) w = uniform_in(rng, 0.05, 1.0);
    return Categorical::from_weights(space, weights);
  };
  const double alpha = uniform_in(rng, 1e-6, 5.0);
  return FuzzInstance{meanings,
                      utterances,
                      lexicon,
                      positive_dist(meanings),
                      positive_dist(utterances),
                      alpha};
}

}  // namespace rsa2::testing

#endif  // RSA2_TESTS_INSTANCE_FUZZ_HPP_
