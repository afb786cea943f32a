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

#ifndef RSA2_RHETORICAL_HPP_
#define RSA2_RHETORICAL_HPP_

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/categorical.hpp"
#include "rsa2/label_space.hpp"

namespace rsa2 {

// A rhetorical function f_r(c, m, u) in [0,1]: the strategy-specific
// generalization of the literal lexicon indicator. Backed either by a dense
// table over the product space or by a callable for built-in strategies.
class RhetoricalFunction {
 public:
  using Fn = std::function<double(const std::string& context,
                                  const std::string& meaning,
                                  const std::string& utterance)>;

  RhetoricalFunction(std::string strategy, LabelSpacePtr contexts,
                     LabelSpacePtr meanings, LabelSpacePtr utterances, Fn fn);

  // Dense table indexed (context, meaning, utterance) row-major. Every value
  // must be in [0,1].
  static RhetoricalFunction from_table(std::string strategy,
                                       LabelSpacePtr contexts,
                                       LabelSpacePtr meanings,
                                       LabelSpacePtr utterances,
                                       std::vector<double> values);

  const std::string& strategy() const { return strategy_; }
  const LabelSpacePtr& contexts() const { return contexts_; }
  const LabelSpacePtr& meanings() const { return meanings_; }
  const LabelSpacePtr& utterances() const { return utterances_; }

  // Validates labels and that the result lies in [0,1].
  double value(const std::string& context, const std::string& meaning,
               const std::string& utterance) const;
  double value(std::size_t context, std::size_t meaning,
               std::size_t utterance) const;

  // JSON schema: {"strategy": "...", "default": v,
  //               "values": [{"c": ..., "m": ..., "u": ..., "v": ...}, ...]}
  // Unlisted triples take the declared default.
  static RhetoricalFunction from_json(const nlohmann::json& j,
                                      const LabelSpacePtr& contexts,
                                      const LabelSpacePtr& meanings,
                                      const LabelSpacePtr& utterances);
  nlohmann::json to_json() const;

 private:
  std::string strategy_;
  LabelSpacePtr contexts_;
  LabelSpacePtr meanings_;
  LabelSpacePtr utterances_;
  Fn fn_;
};

// The strategy space together with one rhetorical function per strategy,
// aligned index-for-index with the space's labels.
class StrategySet {
 public:
  StrategySet(LabelSpacePtr strategies, std::vector<RhetoricalFunction> functions);

  const LabelSpacePtr& strategies() const { return strategies_; }
  const RhetoricalFunction& function(std::size_t index) const;
  const RhetoricalFunction& function(const std::string& strategy) const;

 private:
  LabelSpacePtr strategies_;
  std::vector<RhetoricalFunction> functions_;
};

// --- strategy-conditioned recursion ------------------------------------------

// L0(m|c,u,r) proportional to f_r(c,m,u) * P(m|c).
Categorical l0_conditioned(const RhetoricalFunction& fr,
                           const Categorical& meaning_prior,
                           const std::string& context,
                           const std::string& utterance);

// S1(u|m,c,r) proportional to L0(m|c,u,r)^alpha * P(u|c), normalized over the
// full declared utterance set.
Categorical s1_conditioned(double alpha, const RhetoricalFunction& fr,
                           const Categorical& meaning_prior,
                           const Categorical& utterance_prior,
                           const std::string& context,
                           const std::string& meaning);

// L1(m|c,u,r) proportional to S1(u|m,c,r) * P(m|c). Meanings with an all-zero
// speaker row contribute exactly zero mass.
Categorical l1_conditioned(double alpha, const RhetoricalFunction& fr,
                           const Categorical& meaning_prior,
                           const Categorical& utterance_prior,
                           const std::string& context,
                           const std::string& utterance);

// Marginalizes the latent strategy: sum_r P(r|c,u) * listener_r. Listeners
// are aligned with the posterior's strategy space.
Categorical l1_marginal(const std::vector<Categorical>& listeners,
                        const Categorical& strategy_posterior);

// --- built-in rhetorical functions and helpers -------------------------------

// The case function for non-literal price expressions. Meanings and
// utterances are the ten prices {50, 51, 500, 501, 1000, 1001, 5000, 5001,
// 10000, 10001}; the context is ignored. Strategies: literal (u == m),
// hyperbole (u - m > 10), understatement (m - u > 10), halo (|u - m| == 1 and
// u ends in the digit 0). Matching cases score 1, everything else 0.001.
double numbers_fr(const std::string& strategy, long meaning, long utterance);

// Point mass on the argmax strategy (ties to the lowest index).
Categorical indicator_posterior(const Categorical& strategy_posterior);

// The rhetorical function implied by a pair of elicited distributions:
// f(m) = P(m|c,u,r) / (k * P(m|c)) with k the maximum raw ratio, so the
// result lies in [0,1] with max exactly 1. Throws DivisionByZeroPriorError
// when the prior has a zero entry.
std::vector<double> implicit_fr(const Categorical& posterior_given_strategy,
                                const Categorical& prior);

}  // namespace rsa2

#endif  // RSA2_RHETORICAL_HPP_
