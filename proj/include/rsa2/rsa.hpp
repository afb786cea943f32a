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

#ifndef RSA2_RSA_HPP_
#define RSA2_RSA_HPP_

#include <optional>
#include <string>
#include <vector>

#include "rsa2/categorical.hpp"
#include "rsa2/conditional_table.hpp"
#include "rsa2/lexicon.hpp"

namespace rsa2 {

// Rationality parameter. alpha = 0 flattens the speaker over expressible
// utterances; large alpha approaches argmax behaviour.
struct RsaConfig {
  double alpha = 1.0;
};

// The prior bundle of one model run: P(m|c), P(u|c) and, for strategy-aware
// models, P(r|c,u).
class PriorSet {
 public:
  PriorSet(ConditionalTable meaning_prior, ConditionalTable utterance_prior,
           std::optional<ConditionalTable> strategy_posterior = std::nullopt);

  const ConditionalTable& meaning_prior() const { return meaning_prior_; }
  const ConditionalTable& utterance_prior() const { return utterance_prior_; }
  const std::optional<ConditionalTable>& strategy_posterior() const {
    return strategy_posterior_;
  }

 private:
  ConditionalTable meaning_prior_;
  ConditionalTable utterance_prior_;
  std::optional<ConditionalTable> strategy_posterior_;
};

// l0^alpha with the convention 0^0 = 0, so the exact-zero product structure
// of the recursion survives alpha = 0 probing.
double listener_power(double l0, double alpha);

// --- row-level recursion (one context slice) --------------------------------

// Distribution over meanings literally compatible with u, weighted by the
// prior. Throws AllZeroMassError when the denotation misses the prior support.
Categorical literal_listener(const SemanticLexicon& lex,
                             const Categorical& meaning_prior,
                             const std::string& utterance);

// Distribution over the full declared utterance set for an intended meaning,
// proportional to L0(m|u)^alpha * P(u|c).
Categorical pragmatic_speaker(double alpha, const SemanticLexicon& lex,
                              const Categorical& meaning_prior,
                              const Categorical& utterance_prior,
                              const std::string& meaning);

// Bayesian inversion of the speaker against the meaning prior. A meaning no
// utterance can convey contributes zero mass rather than an error; the error
// surfaces only when every meaning is annihilated.
Categorical pragmatic_listener(double alpha, const SemanticLexicon& lex,
                               const Categorical& meaning_prior,
                               const Categorical& utterance_prior,
                               const std::string& utterance);

// Expected-utility speaker formulation: proportional to
// exp(-alpha * kappa(u)) * L0(m|u)^alpha, with kappa indexed by utterance.
// Choosing kappa(u) = -ln P(u|c) / alpha recovers pragmatic_speaker.
Categorical cost_speaker(double alpha, const std::vector<double>& kappa,
                         const SemanticLexicon& lex,
                         const Categorical& meaning_prior,
                         const std::string& meaning);

// --- context-keyed wrappers over a PriorSet ---------------------------------

Categorical literal_listener(const SemanticLexicon& lex, const PriorSet& priors,
                             const std::string& context,
                             const std::string& utterance);

Categorical pragmatic_speaker(const RsaConfig& config,
                              const SemanticLexicon& lex,
                              const PriorSet& priors,
                              const std::string& context,
                              const std::string& meaning);

Categorical pragmatic_listener(const RsaConfig& config,
                               const SemanticLexicon& lex,
                               const PriorSet& priors,
                               const std::string& context,
                               const std::string& utterance);

}  // namespace rsa2

#endif  // RSA2_RSA_HPP_
