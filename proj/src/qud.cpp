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

#include "rsa2/qud.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"

namespace rsa2 {

namespace {

void check_total(const Projection& q, const LabelSpacePtr& meanings) {
  for (const auto& m : meanings->labels()) {
    if (q.fiber_of.find(m) == q.fiber_of.end()) {
      throw DataError("projection \"" + q.name +
                      "\" is not defined for meaning \"" + m + "\"");
    }
  }
}

// Pools a meaning distribution within the projection's fibers and
// renormalizes; this is the Definition-1 sum.
std::vector<double> pooled_weights(const std::vector<double>& l0,
                                   const LabelSpacePtr& meanings,
                                   const Projection& q) {
  std::map<std::string, double> fiber_mass;
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    fiber_mass[q.fiber_of.at(meanings->label(m))] += l0[m];
  }
  std::vector<double> pooled(meanings->size(), 0.0);
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    pooled[m] = fiber_mass[q.fiber_of.at(meanings->label(m))];
  }
  return pooled;
}

std::optional<Categorical> try_qud_l0(const SemanticLexicon& lex,
                                      const Categorical& meaning_prior,
                                      const std::string& utterance,
                                      const Projection& q) {
  try {
    return qud_literal_listener(lex, meaning_prior, utterance, q);
  } catch (const AllZeroMassError&) {
    return std::nullopt;
  }
}

}  // namespace

Projection Projection::identity(const LabelSpacePtr& meanings) {
  Projection q{"identity", {}};
  for (const auto& m : meanings->labels()) q.fiber_of[m] = m;
  return q;
}

Projection Projection::constant(const LabelSpacePtr& meanings,
                                std::string fiber) {
  Projection q{"constant", {}};
  for (const auto& m : meanings->labels()) q.fiber_of[m] = fiber;
  return q;
}

Categorical qud_literal_listener(const SemanticLexicon& lex,
                                 const Categorical& meaning_prior,
                                 const std::string& utterance,
                                 const Projection& q) {
  check_total(q, lex.meanings());
  const Categorical l0 = literal_listener(lex, meaning_prior, utterance);
  const auto pooled = pooled_weights(l0.probs(), lex.meanings(), q);
  return Categorical::from_weights(lex.meanings(), pooled);
}

Categorical qud_speaker(double alpha, const SemanticLexicon& lex,
                        const Categorical& meaning_prior,
                        const Categorical& utterance_prior,
                        const std::string& meaning, const Projection& q) {
  const auto& utterances = lex.utterances();
  const std::size_t m = lex.meanings()->index_of(meaning);
  std::vector<double> weights(utterances->size(), 0.0);
  for (std::size_t u = 0; u < utterances->size(); ++u) {
    const auto l0q = try_qud_l0(lex, meaning_prior, utterances->label(u), q);
    const double recovered = l0q ? l0q->prob(m) : 0.0;
    weights[u] = listener_power(recovered, alpha) * utterance_prior.prob(u);
  }
  return Categorical::from_weights(utterances, weights);
}

Categorical qud_listener(double alpha, const SemanticLexicon& lex,
                         const Categorical& meaning_prior,
                         const Categorical& utterance_prior,
                         const std::string& utterance, const Projection& q) {
  const auto& meanings = lex.meanings();
  std::vector<double> weights(meanings->size(), 0.0);
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    double s1_u = 0.0;
    try {
      s1_u = qud_speaker(alpha, lex, meaning_prior, utterance_prior,
                         meanings->label(m), q)
                 .prob(utterance);
    } catch (const AllZeroMassError&) {
      s1_u = 0.0;
    }
    weights[m] = s1_u * meaning_prior.prob(m);
  }
  return Categorical::from_weights(meanings, weights);
}

StrategySet qud_to_rsa2(const QudInstance& instance) {
  const auto& meanings = instance.lexicon.meanings();
  const auto& utterances = instance.lexicon.utterances();
  const auto& contexts = instance.contexts;

  for (const auto& c : contexts->labels()) {
    const auto& prior = instance.meaning_prior.row(c);
    for (std::size_t m = 0; m < meanings->size(); ++m) {
      if (prior.prob(m) <= 0.0) {
        throw ZeroPriorViolationError(
            "meaning prior must be strictly positive; P(\"" +
            meanings->label(m) + "\"|\"" + c + "\") = 0");
      }
    }
  }

  std::vector<std::string> names;
  std::vector<RhetoricalFunction> functions;
  std::set<std::string> seen;
  for (const auto& q : instance.projections) {
    check_total(q, meanings);
    if (!seen.insert(q.name).second) {
      throw DataError("duplicate projection name \"" + q.name + "\"");
    }
    std::vector<double> table(
        contexts->size() * meanings->size() * utterances->size(), 0.0);
    for (std::size_t c = 0; c < contexts->size(); ++c) {
      const auto& prior = instance.meaning_prior.row(contexts->label(c));
      for (std::size_t u = 0; u < utterances->size(); ++u) {
        const auto l0q = try_qud_l0(instance.lexicon, prior,
                                    utterances->label(u), q);
        std::vector<double> raw(meanings->size(), 0.0);
        double k = 0.0;
        for (std::size_t m = 0; m < meanings->size(); ++m) {
          raw[m] = l0q ? l0q->prob(m) / prior.prob(m) : 0.0;
          k = std::max(k, raw[m]);
        }
        for (std::size_t m = 0; m < meanings->size(); ++m) {
          table[(c * meanings->size() + m) * utterances->size() + u] =
              k > 0.0 ? raw[m] / k : 0.0;
        }
      }
    }
    names.push_back(q.name);
    functions.push_back(RhetoricalFunction::from_table(
        q.name, contexts, meanings, utterances, std::move(table)));
  }
  return StrategySet(make_space(SpaceKind::kStrategy, std::move(names)),
                     std::move(functions));
}

std::vector<std::vector<double>> binary_combination_listeners(
    const Categorical& meaning_prior) {
  const std::size_t n = meaning_prior.size();
  if (n > 20) {
    throw ModelError("binary-combination enumeration limited to 20 meanings");
  }
  std::vector<std::vector<double>> listeners;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<double> weights(n, 0.0);
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (mask & (1ul << m)) {
        weights[m] = meaning_prior.prob(m);
        total += weights[m];
      }
    }
    if (total <= 0.0) continue;
    for (double& w : weights) w /= total;
    listeners.push_back(std::move(weights));
  }
  return listeners;
}

Lemma2Witness lemma2_witness(const LabelSpacePtr& contexts,
                             const LabelSpacePtr& utterances,
                             const Categorical& meaning_prior) {
  const auto& meanings = meaning_prior.space();
  if (meanings->size() < 2) {
    throw ModelError("the witness construction needs at least two meanings");
  }
  for (std::size_t m = 0; m < meanings->size(); ++m) {
    if (meaning_prior.prob(m) <= 0.0) {
      throw ZeroPriorViolationError(
          "the witness construction needs a strictly positive prior");
    }
  }

  const auto reachable = binary_combination_listeners(meaning_prior);
  double p_min = 1.0;
  for (const auto& vec : reachable) {
    for (double p : vec) {
      if (p > 0.0) p_min = std::min(p_min, p);
    }
  }
  const double k = p_min / 2.0;

  // Two-point function: mass k on the first meaning, 1 - k on the second,
  // rescaled by its maximum to stay in [0,1].
  std::vector<double> f(meanings->size(), 0.0);
  f[0] = k / meaning_prior.prob(0);
  f[1] = (1.0 - k) / meaning_prior.prob(1);
  const double f_max = std::max(f[0], f[1]);
  for (double& v : f) v /= f_max;

  std::vector<double> table(
      contexts->size() * meanings->size() * utterances->size(), 0.0);
  for (std::size_t c = 0; c < contexts->size(); ++c) {
    for (std::size_t m = 0; m < meanings->size(); ++m) {
      for (std::size_t u = 0; u < utterances->size(); ++u) {
        table[(c * meanings->size() + m) * utterances->size() + u] = f[m];
      }
    }
  }
  return Lemma2Witness{
      RhetoricalFunction::from_table("witness", contexts, meanings, utterances,
                                     std::move(table)),
      k, p_min};
}

// --- affect-aware weather model ----------------------------------------------

namespace {

// Flattened joint index over (state, arousal, valence).
struct JointLayout {
  std::size_t states;
  std::size_t arousal;
  std::size_t valence;

  std::size_t size() const { return states * arousal * valence; }
  std::size_t index(std::size_t s, std::size_t a, std::size_t v) const {
    return (s * arousal + a) * valence + v;
  }
  std::size_t state_of(std::size_t j) const { return j / (arousal * valence); }
  std::size_t arousal_of(std::size_t j) const {
    return (j / valence) % arousal;
  }
  std::size_t valence_of(std::size_t j) const { return j % valence; }
};

enum class WeatherQud { kLiteral = 0, kArousal = 1, kValence = 2 };

std::size_t fiber_of(const JointLayout& layout, WeatherQud q, std::size_t j) {
  switch (q) {
    case WeatherQud::kLiteral:
      return layout.state_of(j);
    case WeatherQud::kArousal:
      return layout.arousal_of(j);
    case WeatherQud::kValence:
      return layout.valence_of(j);
  }
  return 0;
}

std::size_t fiber_count(const JointLayout& layout, WeatherQud q) {
  switch (q) {
    case WeatherQud::kLiteral:
      return layout.states;
    case WeatherQud::kArousal:
      return layout.arousal;
    case WeatherQud::kValence:
      return layout.valence;
  }
  return 0;
}

std::vector<double> normalized_or_empty(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return {};
  for (double& w : weights) w /= total;
  return weights;
}

// Literal joint listener for one utterance; empty when the utterance's
// denotation carries no prior mass.
std::vector<double> joint_literal(const JointLayout& layout,
                                  const std::vector<double>& joint_prior,
                                  const std::vector<bool>& state_compatible,
                                  std::size_t /*utterance*/) {
  std::vector<double> weights(layout.size(), 0.0);
  for (std::size_t j = 0; j < layout.size(); ++j) {
    weights[j] = state_compatible[layout.state_of(j)] ? joint_prior[j] : 0.0;
  }
  return normalized_or_empty(std::move(weights));
}

std::vector<double> pool_by_qud(const JointLayout& layout, WeatherQud q,
                                const std::vector<double>& l0_joint) {
  std::vector<double> mass(fiber_count(layout, q), 0.0);
  for (std::size_t j = 0; j < layout.size(); ++j) {
    mass[fiber_of(layout, q, j)] += l0_joint[j];
  }
  std::vector<double> pooled(layout.size(), 0.0);
  for (std::size_t j = 0; j < layout.size(); ++j) {
    pooled[j] = mass[fiber_of(layout, q, j)];
  }
  return normalized_or_empty(std::move(pooled));
}

struct AffectRun {
  JointLayout layout;
  std::vector<double> joint_prior;
  // per utterance: projection-pooled L0 for each of the three QUDs; empty
  // vectors mark utterances without prior support
  std::vector<std::array<std::vector<double>, 3>> l0_by_utterance;
  std::size_t observed;
  std::vector<double> qud_prior;
};

AffectRun prepare_run(const WeatherPriors& priors,
                      const SemanticLexicon& state_lexicon,
                      const std::string& context,
                      const std::string& utterance) {
  const auto& states = state_lexicon.meanings();
  const auto& utterances = state_lexicon.utterances();
  const Categorical& ps = priors.state_prior.row(context);
  const Categorical& pa = priors.arousal_prior.row(context);
  const Categorical& pv = priors.valence_prior.row(context);

  AffectRun run;
  run.layout = JointLayout{states->size(), pa.size(), pv.size()};
  run.joint_prior.resize(run.layout.size());
  for (std::size_t s = 0; s < run.layout.states; ++s) {
    for (std::size_t a = 0; a < run.layout.arousal; ++a) {
      for (std::size_t v = 0; v < run.layout.valence; ++v) {
        run.joint_prior[run.layout.index(s, a, v)] =
            ps.prob(s) * pa.prob(a) * pv.prob(v);
      }
    }
  }

  run.qud_prior = priors.qud_prior;
  double q_total = 0.0;
  for (double p : run.qud_prior) q_total += p;
  if (run.qud_prior.size() != 3 || std::abs(q_total - 1.0) > 1e-9) {
    throw DataError("qud prior must have three entries summing to 1");
  }

  run.observed = utterances->index_of(utterance);
  run.l0_by_utterance.resize(utterances->size());
  for (std::size_t u = 0; u < utterances->size(); ++u) {
    std::vector<bool> compatible(states->size(), false);
    for (const auto& s : state_lexicon.denotation(utterances->label(u))) {
      compatible[states->index_of(s)] = true;
    }
    const auto joint =
        joint_literal(run.layout, run.joint_prior, compatible, u);
    if (joint.empty()) continue;
    for (int q = 0; q < 3; ++q) {
      run.l0_by_utterance[u][q] =
          pool_by_qud(run.layout, static_cast<WeatherQud>(q), joint);
    }
  }
  if (run.l0_by_utterance[run.observed][0].empty()) {
    throw AllZeroMassError("utterance \"" + utterance +
                           "\" has no literal support under the prior");
  }
  return run;
}

Categorical state_marginal(const JointLayout& layout,
                           const std::vector<double>& joint,
                           const LabelSpacePtr& states) {
  std::vector<double> weights(layout.states, 0.0);
  for (std::size_t j = 0; j < layout.size(); ++j) {
    weights[layout.state_of(j)] += joint[j];
  }
  return Categorical::from_weights(states, weights);
}

}  // namespace

WeatherPriors WeatherPriors::from_json(const nlohmann::json& j,
                                       const LabelSpacePtr& contexts,
                                       const LabelSpacePtr& states,
                                       const LabelSpacePtr& arousal,
                                       const LabelSpacePtr& valence) {
  for (const char* key :
       {"state_prior", "arousal_prior", "valence_prior", "qud_prior"}) {
    if (!j.contains(key)) {
      throw DataError(std::string("weather priors JSON is missing \"") + key +
                      "\"");
    }
  }
  std::vector<double> qud_prior = {
      j.at("qud_prior").at("literal").get<double>(),
      j.at("qud_prior").at("arousal").get<double>(),
      j.at("qud_prior").at("valence").get<double>()};
  return WeatherPriors{
      ConditionalTable::from_json(j.at("state_prior"), {contexts}, states),
      ConditionalTable::from_json(j.at("arousal_prior"), {contexts}, arousal),
      ConditionalTable::from_json(j.at("valence_prior"), {contexts}, valence),
      std::move(qud_prior)};
}

Categorical affect_weather_model(const WeatherPriors& priors,
                                 const SemanticLexicon& state_lexicon,
                                 double alpha, const std::string& context,
                                 const std::string& utterance) {
  const auto run = prepare_run(priors, state_lexicon, context, utterance);
  const auto& layout = run.layout;

  std::vector<double> l1_mix(layout.size(), 0.0);
  for (int q = 0; q < 3; ++q) {
    // Speaker over utterances per joint cell, uniform utterance prior.
    std::vector<double> l1q(layout.size(), 0.0);
    for (std::size_t j = 0; j < layout.size(); ++j) {
      const auto& observed_l0 = run.l0_by_utterance[run.observed][q];
      const double numer = listener_power(observed_l0[j], alpha);
      double denom = 0.0;
      for (const auto& per_qud : run.l0_by_utterance) {
        if (!per_qud[q].empty()) {
          denom += listener_power(per_qud[q][j], alpha);
        }
      }
      const double s1 = denom > 0.0 ? numer / denom : 0.0;
      l1q[j] = run.joint_prior[j] * s1;
    }
    for (std::size_t j = 0; j < layout.size(); ++j) {
      l1_mix[j] += run.qud_prior[q] * l1q[j];
    }
  }
  return state_marginal(layout, l1_mix, state_lexicon.meanings());
}

Categorical affect_weather_literal(const WeatherPriors& priors,
                                   const SemanticLexicon& state_lexicon,
                                   const std::string& context,
                                   const std::string& utterance) {
  const auto run = prepare_run(priors, state_lexicon, context, utterance);
  std::vector<double> l0_mix(run.layout.size(), 0.0);
  for (int q = 0; q < 3; ++q) {
    const auto& l0q = run.l0_by_utterance[run.observed][q];
    for (std::size_t j = 0; j < run.layout.size(); ++j) {
      l0_mix[j] += run.qud_prior[q] * l0q[j];
    }
  }
  return state_marginal(run.layout, l0_mix, state_lexicon.meanings());
}

}  // namespace rsa2
