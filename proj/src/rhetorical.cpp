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

#include "rsa2/rhetorical.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"
#include "rsa2/rsa.hpp"

namespace rsa2 {

namespace {

constexpr long kPrices[] = {50,   51,   500,  501,   1000,
                            1001, 5000, 5001, 10000, 10001};

bool is_price(long value) {
  for (long p : kPrices) {
    if (p == value) return true;
  }
  return false;
}

double checked_value(double v, const std::string& strategy) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ModelError("rhetorical function \"" + strategy +
                     "\" produced a value outside [0,1]");
  }
  return v;
}

}  // namespace

RhetoricalFunction::RhetoricalFunction(std::string strategy,
                                       LabelSpacePtr contexts,
                                       LabelSpacePtr meanings,
                                       LabelSpacePtr utterances, Fn fn)
    : strategy_(std::move(strategy)),
      contexts_(std::move(contexts)),
      meanings_(std::move(meanings)),
      utterances_(std::move(utterances)),
      fn_(std::move(fn)) {
  if (!fn_) {
    throw ModelError("rhetorical function \"" + strategy_ + "\" has no body");
  }
}

RhetoricalFunction RhetoricalFunction::from_table(std::string strategy,
                                                  LabelSpacePtr contexts,
                                                  LabelSpacePtr meanings,
                                                  LabelSpacePtr utterances,
                                                  std::vector<double> values) {
  const std::size_t expected =
      contexts->size() * meanings->size() * utterances->size();
  if (values.size() != expected) {
    throw LengthMismatchError("rhetorical table for \"" + strategy + "\" has " +
                              std::to_string(values.size()) +
                              " cells, expected " + std::to_string(expected));
  }
  for (double v : values) checked_value(v, strategy);

  auto table = std::make_shared<std::vector<double>>(std::move(values));
  auto contexts_copy = contexts;
  auto meanings_copy = meanings;
  auto utterances_copy = utterances;
  auto fn = [table, contexts_copy, meanings_copy, utterances_copy](
                const std::string& c, const std::string& m,
                const std::string& u) {
    const std::size_t index =
        (contexts_copy->index_of(c) * meanings_copy->size() +
         meanings_copy->index_of(m)) *
            utterances_copy->size() +
        utterances_copy->index_of(u);
    return (*table)[index];
  };
  return RhetoricalFunction(std::move(strategy), std::move(contexts),
                            std::move(meanings), std::move(utterances),
                            std::move(fn));
}

double RhetoricalFunction::value(const std::string& context,
                                 const std::string& meaning,
                                 const std::string& utterance) const {
  // index_of validates membership as a side effect
  contexts_->index_of(context);
  meanings_->index_of(meaning);
  utterances_->index_of(utterance);
  return checked_value(fn_(context, meaning, utterance), strategy_);
}

double RhetoricalFunction::value(std::size_t context, std::size_t meaning,
                                 std::size_t utterance) const {
  return value(contexts_->label(context), meanings_->label(meaning),
               utterances_->label(utterance));
}

RhetoricalFunction RhetoricalFunction::from_json(
    const nlohmann::json& j, const LabelSpacePtr& contexts,
    const LabelSpacePtr& meanings, const LabelSpacePtr& utterances) {
  if (!j.is_object() || !j.contains("strategy")) {
    throw DataError("rhetorical function JSON must declare a \"strategy\"");
  }
  const auto strategy = j.at("strategy").get<std::string>();
  const double fallback = j.value("default", 0.0);
  std::vector<double> values(
      contexts->size() * meanings->size() * utterances->size(), fallback);
  if (j.contains("values")) {
    for (const auto& entry : j.at("values")) {
      const std::size_t c = contexts->index_of(entry.at("c").get<std::string>());
      const std::size_t m = meanings->index_of(entry.at("m").get<std::string>());
      const std::size_t u =
          utterances->index_of(entry.at("u").get<std::string>());
      values[(c * meanings->size() + m) * utterances->size() + u] =
          entry.at("v").get<double>();
    }
  }
  return from_table(strategy, contexts, meanings, utterances,
                    std::move(values));
}

nlohmann::json RhetoricalFunction::to_json() const {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& c : contexts_->labels()) {
    for (const auto& m : meanings_->labels()) {
      for (const auto& u : utterances_->labels()) {
        values.push_back({{"c", c}, {"m", m}, {"u", u}, {"v", value(c, m, u)}});
      }
    }
  }
  return nlohmann::json{
      {"strategy", strategy_}, {"default", 0.0}, {"values", std::move(values)}};
}

StrategySet::StrategySet(LabelSpacePtr strategies,
                         std::vector<RhetoricalFunction> functions)
    : strategies_(std::move(strategies)), functions_(std::move(functions)) {
  if (strategies_->kind() != SpaceKind::kStrategy) {
    throw DataError("strategy set requires a strategy-kind space");
  }
  if (functions_.size() != strategies_->size()) {
    throw DataError("strategy set has " + std::to_string(functions_.size()) +
                    " functions for " + std::to_string(strategies_->size()) +
                    " strategies");
  }
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    if (functions_[i].strategy() != strategies_->label(i)) {
      throw DataError("rhetorical function \"" + functions_[i].strategy() +
                      "\" is misaligned with strategy label \"" +
                      strategies_->label(i) + "\"");
    }
  }
}

const RhetoricalFunction& StrategySet::function(std::size_t index) const {
  if (index >= functions_.size()) {
    throw LabelOutOfSpaceError("strategy index " + std::to_string(index) +
                               " out of range");
  }
  return functions_[index];
}

const RhetoricalFunction& StrategySet::function(
    const std::string& strategy) const {
  return functions_[strategies_->index_of(strategy)];
}

Categorical l0_conditioned(const RhetoricalFunction& fr,
                           const Categorical& meaning_prior,
                           const std::string& context,
                           const std::string& utterance) {
  if (!same_space(meaning_prior.space(), fr.meanings())) {
    throw SpaceMismatchError(
        "meaning prior is not over the rhetorical function's meanings");
  }
  const auto& meanings = fr.meanings();
  std::vector<double> weights(meanings->size(), 0.0);
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    weights[m] =
        fr.value(context, meanings->label(m), utterance) * meaning_prior.prob(m);
  }
  return Categorical::from_weights(meanings, weights);
}

Categorical s1_conditioned(double alpha, const RhetoricalFunction& fr,
                           const Categorical& meaning_prior,
                           const Categorical& utterance_prior,
                           const std::string& context,
                           const std::string& meaning) {
  if (!same_space(utterance_prior.space(), fr.utterances())) {
    throw SpaceMismatchError(
        "utterance prior is not over the rhetorical function's utterances");
  }
  const auto& utterances = fr.utterances();
  std::vector<double> weights(utterances->size(), 0.0);
  for (std::size_t u = 0; u < utterances->size(); ++u) {
    double recovered = 0.0;
    try {
      recovered =
          l0_conditioned(fr, meaning_prior, context, utterances->label(u))
              .prob(meaning);
    } catch (const AllZeroMassError&) {
      recovered = 0.0;  // f_r annihilates this utterance entirely
    }
    weights[u] = listener_power(recovered, alpha) * utterance_prior.prob(u);
  }
  return Categorical::from_weights(utterances, weights);
}

Categorical l1_conditioned(double alpha, const RhetoricalFunction& fr,
                           const Categorical& meaning_prior,
                           const Categorical& utterance_prior,
                           const std::string& context,
                           const std::string& utterance) {
  const auto& meanings = fr.meanings();
  std::vector<double> weights(meanings->size(), 0.0);
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    double s1_u = 0.0;
    try {
      s1_u = s1_conditioned(alpha, fr, meaning_prior, utterance_prior, context,
                            meanings->label(m))
                 .prob(utterance);
    } catch (const AllZeroMassError&) {
      s1_u = 0.0;  // no utterance can convey m under this strategy
    }
    weights[m] = s1_u * meaning_prior.prob(m);
  }
  return Categorical::from_weights(meanings, weights);
}

Categorical l1_marginal(const std::vector<Categorical>& listeners,
                        const Categorical& strategy_posterior) {
  if (strategy_posterior.space()->kind() != SpaceKind::kStrategy) {
    throw SpaceMismatchError(
        "strategy posterior must be over a strategy space");
  }
  if (listeners.size() != strategy_posterior.size()) {
    throw SpaceMismatchError(
        "got " + std::to_string(listeners.size()) + " listeners for " +
        std::to_string(strategy_posterior.size()) + " strategies");
  }
  std::vector<std::pair<double, Categorical>> components;
  components.reserve(listeners.size());
  for (std::size_t r = 0; r < listeners.size(); ++r) {
    components.emplace_back(strategy_posterior.prob(r), listeners[r]);
  }
  return mix(components);
}

double numbers_fr(const std::string& strategy, long meaning, long utterance) {
  if (!is_price(meaning)) {
    throw LabelOutOfSpaceError("meaning " + std::to_string(meaning) +
                               " is not one of the ten prices");
  }
  if (!is_price(utterance)) {
    throw LabelOutOfSpaceError("utterance " + std::to_string(utterance) +
                               " is not one of the ten prices");
  }
  bool triggered = false;
  if (strategy == "literal") {
    triggered = utterance == meaning;
  } else if (strategy == "hyperbole") {
    triggered = utterance - meaning > 10;
  } else if (strategy == "understatement") {
    triggered = meaning - utterance > 10;
  } else if (strategy == "halo") {
    triggered = std::labs(utterance - meaning) == 1 && utterance % 10 == 0;
  } else {
    throw LabelOutOfSpaceError("unknown price strategy \"" + strategy + "\"");
  }
  return triggered ? 1.0 : 0.001;
}

Categorical indicator_posterior(const Categorical& strategy_posterior) {
  return Categorical::delta(strategy_posterior.space(),
                            strategy_posterior.argmax_label());
}

std::vector<double> implicit_fr(const Categorical& posterior_given_strategy,
                                const Categorical& prior) {
  if (!same_space(posterior_given_strategy.space(), prior.space())) {
    throw SpaceMismatchError(
        "implicit_fr requires distributions over one meaning space");
  }
  std::vector<double> ratios(prior.size(), 0.0);
  for (std::size_t m = 0; m < prior.size(); ++m) {
    if (prior.prob(m) <= 0.0) {
      throw DivisionByZeroPriorError(
          "meaning prior assigns zero probability to \"" +
          prior.space()->label(m) + "\"");
    }
    ratios[m] = posterior_given_strategy.prob(m) / prior.prob(m);
  }
  double k = 0.0;
  for (double r : ratios) k = std::max(k, r);
  for (double& r : ratios) r /= k;
  return ratios;
}

}  // namespace rsa2
