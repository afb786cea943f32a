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

#include "rsa2/rsa.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "rsa2/errors.hpp"

namespace rsa2 {

namespace {

void check_axis(const ConditionalTable& table, SpaceKind over,
                std::vector<SpaceKind> given, const char* name) {
  if (table.over()->kind() != over) {
    throw DataError(std::string(name) + " must be over the " +
                    to_string(over) + " space");
  }
  if (table.given().size() != given.size()) {
    throw DataError(std::string(name) + " has the wrong number of axes");
  }
  for (std::size_t i = 0; i < given.size(); ++i) {
    if (table.given()[i]->kind() != given[i]) {
      throw DataError(std::string(name) + " axis " + std::to_string(i) +
                      " must be " + to_string(given[i]));
    }
  }
}

// One literal-listener row per utterance; nullopt marks an utterance whose
// denotation carries no prior mass (unusable, contributes zero to speakers).
std::vector<std::optional<Categorical>> literal_rows(
    const SemanticLexicon& lex, const Categorical& meaning_prior) {
  const auto& utterances = lex.utterances();
  std::vector<std::optional<Categorical>> rows;
  rows.reserve(utterances->size());
  for (const auto& utterance : utterances->labels()) {
    try {
      rows.emplace_back(literal_listener(lex, meaning_prior, utterance));
    } catch (const AllZeroMassError&) {
      rows.emplace_back(std::nullopt);
    }
  }
  return rows;
}

// Unnormalized speaker weights over utterances for one intended meaning. The
// all-zero vector signals a meaning no utterance can convey.
std::vector<double> speaker_weights(
    double alpha, const std::vector<std::optional<Categorical>>& l0_rows,
    const Categorical& utterance_prior, std::size_t meaning_index) {
  std::vector<double> weights(l0_rows.size(), 0.0);
  for (std::size_t u = 0; u < l0_rows.size(); ++u) {
    const double recovered = l0_rows[u] ? l0_rows[u]->prob(meaning_index) : 0.0;
    weights[u] = listener_power(recovered, alpha) * utterance_prior.prob(u);
  }
  return weights;
}

}  // namespace

PriorSet::PriorSet(ConditionalTable meaning_prior,
                   ConditionalTable utterance_prior,
                   std::optional<ConditionalTable> strategy_posterior)
    : meaning_prior_(std::move(meaning_prior)),
      utterance_prior_(std::move(utterance_prior)),
      strategy_posterior_(std::move(strategy_posterior)) {
  check_axis(meaning_prior_, SpaceKind::kMeaning, {SpaceKind::kContext},
             "meaning prior");
  check_axis(utterance_prior_, SpaceKind::kUtterance, {SpaceKind::kContext},
             "utterance prior");
  if (strategy_posterior_) {
    check_axis(*strategy_posterior_, SpaceKind::kStrategy,
               {SpaceKind::kContext, SpaceKind::kUtterance},
               "strategy posterior");
  }
}

double listener_power(double l0, double alpha) {
  if (l0 <= 0.0) return 0.0;
  if (alpha == 0.0) return 1.0;
  if (alpha == 1.0) return l0;
  return std::pow(l0, alpha);
}

Categorical literal_listener(const SemanticLexicon& lex,
                             const Categorical& meaning_prior,
                             const std::string& utterance) {
  if (!same_space(meaning_prior.space(), lex.meanings())) {
    throw SpaceMismatchError("meaning prior is not over the lexicon's meanings");
  }
  const auto& meanings = lex.meanings();
  std::vector<double> weights(meanings->size(), 0.0);
  for (const auto& meaning : lex.denotation(utterance)) {
    const std::size_t m = meanings->index_of(meaning);
    weights[m] = meaning_prior.prob(m);
  }
  return Categorical::from_weights(meanings, weights);
}

Categorical pragmatic_speaker(double alpha, const SemanticLexicon& lex,
                              const Categorical& meaning_prior,
                              const Categorical& utterance_prior,
                              const std::string& meaning) {
  if (!same_space(utterance_prior.space(), lex.utterances())) {
    throw SpaceMismatchError(
        "utterance prior is not over the lexicon's utterances");
  }
  const auto rows = literal_rows(lex, meaning_prior);
  const auto weights = speaker_weights(alpha, rows, utterance_prior,
                                       lex.meanings()->index_of(meaning));
  return Categorical::from_weights(lex.utterances(), weights);
}

Categorical pragmatic_listener(double alpha, const SemanticLexicon& lex,
                               const Categorical& meaning_prior,
                               const Categorical& utterance_prior,
                               const std::string& utterance) {
  if (!same_space(utterance_prior.space(), lex.utterances())) {
    throw SpaceMismatchError(
        "utterance prior is not over the lexicon's utterances");
  }
  const auto& meanings = lex.meanings();
  const std::size_t u = lex.utterances()->index_of(utterance);
  const auto rows = literal_rows(lex, meaning_prior);
  std::vector<double> weights(meanings->size(), 0.0);
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    const auto s1 = speaker_weights(alpha, rows, utterance_prior, m);
    double total = 0.0;
    for (double w : s1) total += w;
    // A meaning with an all-zero speaker row is inexpressible and keeps
    // exactly zero listener mass; the product below never rounds away from 0.
    const double s1_u = total > 0.0 ? s1[u] / total : 0.0;
    weights[m] = s1_u * meaning_prior.prob(m);
  }
  return Categorical::from_weights(meanings, weights);
}

Categorical cost_speaker(double alpha, const std::vector<double>& kappa,
                         const SemanticLexicon& lex,
                         const Categorical& meaning_prior,
                         const std::string& meaning) {
  const auto& utterances = lex.utterances();
  if (kappa.size() != utterances->size()) {
    throw LengthMismatchError("cost vector of length " +
                              std::to_string(kappa.size()) +
                              " does not match the utterance space");
  }
  for (double k : kappa) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw ModelError("utterance costs must be finite and non-negative");
    }
  }
  const auto rows = literal_rows(lex, meaning_prior);
  const std::size_t m = lex.meanings()->index_of(meaning);
  std::vector<double> weights(utterances->size(), 0.0);
  for (std::size_t u = 0; u < utterances->size(); ++u) {
    const double recovered = rows[u] ? rows[u]->prob(m) : 0.0;
    weights[u] = std::exp(-alpha * kappa[u]) * listener_power(recovered, alpha);
  }
  return Categorical::from_weights(utterances, weights);
}

Categorical literal_listener(const SemanticLexicon& lex, const PriorSet& priors,
                             const std::string& context,
                             const std::string& utterance) {
  return literal_listener(lex, priors.meaning_prior().row(context), utterance);
}

Categorical pragmatic_speaker(const RsaConfig& config,
                              const SemanticLexicon& lex,
                              const PriorSet& priors,
                              const std::string& context,
                              const std::string& meaning) {
  return pragmatic_speaker(config.alpha, lex,
                           priors.meaning_prior().row(context),
                           priors.utterance_prior().row(context), meaning);
}

Categorical pragmatic_listener(const RsaConfig& config,
                               const SemanticLexicon& lex,
                               const PriorSet& priors,
                               const std::string& context,
                               const std::string& utterance) {
  return pragmatic_listener(config.alpha, lex,
                            priors.meaning_prior().row(context),
                            priors.utterance_prior().row(context), utterance);
}

}  // namespace rsa2
