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

#ifndef RSA2_QUD_HPP_
#define RSA2_QUD_HPP_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/categorical.hpp"
#include "rsa2/conditional_table.hpp"
#include "rsa2/lexicon.hpp"
#include "rsa2/rhetorical.hpp"
#include "rsa2/rsa.hpp"

namespace rsa2 {

// A question under discussion: a total projection of the meaning space onto
// an arbitrary subspace. Listener mass is pooled within projection fibers.
struct Projection {
  std::string name;
  std::map<std::string, std::string> fiber_of;  // meaning label -> fiber label

  static Projection identity(const LabelSpacePtr& meanings);
  static Projection constant(const LabelSpacePtr& meanings, std::string fiber);
};

// L0(m|c,u,q): standard L0 mass pooled within the fiber of m, renormalized.
Categorical qud_literal_listener(const SemanticLexicon& lex,
                                 const Categorical& meaning_prior,
                                 const std::string& utterance,
                                 const Projection& q);

// S1(u|c,m,q) proportional to L0(m|c,u,q)^alpha * P(u|c).
Categorical qud_speaker(double alpha, const SemanticLexicon& lex,
                        const Categorical& meaning_prior,
                        const Categorical& utterance_prior,
                        const std::string& meaning, const Projection& q);

// L1(m|c,u,q) proportional to S1(u|c,m,q) * P(m|c).
Categorical qud_listener(double alpha, const SemanticLexicon& lex,
                         const Categorical& meaning_prior,
                         const Categorical& utterance_prior,
                         const std::string& utterance, const Projection& q);

// A complete projection-based instance, reducible to a strategy set.
struct QudInstance {
  LabelSpacePtr contexts;
  SemanticLexicon lexicon;
  ConditionalTable meaning_prior;
  ConditionalTable utterance_prior;
  std::vector<Projection> projections;
};

// Constructive reduction: one rhetorical function per projection with
// f(c,m,u) = pooled L0 mass divided by (k * P(m|c)), k the per-(c,u) maximum.
// Plugging the result into l0_conditioned reproduces qud_literal_listener.
// Requires strictly positive meaning priors (ZeroPriorViolationError).
StrategySet qud_to_rsa2(const QudInstance& instance);

// Every distribution a projection-based literal listener can take: the
// normalized restrictions of the prior to non-empty label subsets.
std::vector<std::vector<double>> binary_combination_listeners(
    const Categorical& meaning_prior);

// A rhetorical function whose conditioned L0 provably lies outside the
// projection-reachable set: L0(m1) comes out to exactly k = p_min / 2.
struct Lemma2Witness {
  RhetoricalFunction fr;
  double k;
  double p_min;
};

Lemma2Witness lemma2_witness(const LabelSpacePtr& contexts,
                             const LabelSpacePtr& utterances,
                             const Categorical& meaning_prior);

// --- affect-aware weather model ----------------------------------------------

// Priors for the affect-aware weather listener: state, arousal and valence
// priors are conditionally independent given the context, and the question
// under discussion is drawn from {literal, arousal, valence}.
struct WeatherPriors {
  ConditionalTable state_prior;
  ConditionalTable arousal_prior;
  ConditionalTable valence_prior;
  std::vector<double> qud_prior;  // (literal, arousal, valence)

  // JSON bundle: {"state_prior": <table>, "arousal_prior": <table>,
  //               "valence_prior": <table>,
  //               "qud_prior": {"literal": p, "arousal": p, "valence": p}}
  static WeatherPriors from_json(const nlohmann::json& j,
                                 const LabelSpacePtr& contexts,
                                 const LabelSpacePtr& states,
                                 const LabelSpacePtr& arousal,
                                 const LabelSpacePtr& valence);
};

// Pragmatic listener over weather states: builds the factorized joint prior
// over (state, arousal, valence), runs the projection-based recursion for the
// three QUDs, marginalizes the QUD with its prior and sums out affect.
Categorical affect_weather_model(const WeatherPriors& priors,
                                 const SemanticLexicon& state_lexicon,
                                 double alpha, const std::string& context,
                                 const std::string& utterance);

// Literal-listener counterpart (QUD-marginalized, affect summed out).
Categorical affect_weather_literal(const WeatherPriors& priors,
                                   const SemanticLexicon& state_lexicon,
                                   const std::string& context,
                                   const std::string& utterance);

}  // namespace rsa2

#endif  // RSA2_QUD_HPP_
