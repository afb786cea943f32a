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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "instance_fuzz.hpp"
#include "rsa2/errors.hpp"
#include "rsa2/rsa.hpp"

using namespace rsa2;

namespace {

// The scalar-implicature toy: u1 denotes {m1, m2}, u2 denotes {m2} only,
// uniform priors. Expected values below were derived by hand recursion:
//   L0(.|u1) = [1/2, 1/2],      L0(.|u2) = [0, 1]
//   S1(.|m1) = [1, 0]           (u2 cannot convey m1)
//   S1(.|m2) = [1/3, 2/3]       (weights 1/2 and 1, normalized)
//   L1(.|u1) = [3/4, 1/4]       (weights 1*1/2 and 1/3*1/2)
//   L1(.|u2) = [0, 1]
struct Toy {
  LabelSpacePtr meanings = make_space(SpaceKind::kMeaning, {"m1", "m2"});
  LabelSpacePtr utterances = make_space(SpaceKind::kUtterance, {"u1", "u2"});
  SemanticLexicon lexicon{utterances,
                          meanings,
                          {{"u1", {"m1", "m2"}}, {"u2", {"m2"}}}};
  Categorical meaning_prior = Categorical::uniform(meanings);
  Categorical utterance_prior = Categorical::uniform(utterances);
};

}  // namespace

TEST_CASE("literal listener restricts the prior to the denotation") {
  const Toy toy;
  const auto l0_u1 = literal_listener(toy.lexicon, toy.meaning_prior, "u1");
  CHECK(l0_u1.prob("m1") == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(l0_u1.prob("m2") == doctest::Approx(0.5).epsilon(1e-14));
  const auto l0_u2 = literal_listener(toy.lexicon, toy.meaning_prior, "u2");
  CHECK(l0_u2.prob("m1") == 0.0);
  CHECK(l0_u2.prob("m2") == 1.0);
}

TEST_CASE("singleton denotation forces a point mass") {
  const auto states = make_space(
      SpaceKind::kMeaning, {"terrible", "bad", "ok", "good", "amazing"});
  const auto utterances = make_space(
      SpaceKind::kUtterance,
      {"The weather is terrible.", "The weather is bad.", "The weather is ok.",
       "The weather is good.", "The weather is amazing."});
  const auto lexicon = SemanticLexicon::identity(utterances, states);
  const auto prior =
      Categorical::from_weights(states, {0.3, 0.3, 0.2, 0.1, 0.1});
  const auto l0 = literal_listener(lexicon, prior, "The weather is amazing.");
  CHECK(l0.prob("amazing") == 1.0);
  CHECK(l0.prob("terrible") == 0.0);
}

TEST_CASE("literal listener with empty support raises AllZeroMass") {
  const Toy toy;
  const auto prior = Categorical(toy.meanings, {1.0, 0.0});
  CHECK_THROWS_AS(literal_listener(toy.lexicon, prior, "u2"),
                  AllZeroMassError);
}

TEST_CASE("pragmatic speaker hand recursion") {
  const Toy toy;
  const auto s1_m2 = pragmatic_speaker(1.0, toy.lexicon, toy.meaning_prior,
                                       toy.utterance_prior, "m2");
  CHECK(s1_m2.prob("u1") == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(s1_m2.prob("u2") == doctest::Approx(2.0 / 3).epsilon(1e-12));

  const auto s1_m1 = pragmatic_speaker(1.0, toy.lexicon, toy.meaning_prior,
                                       toy.utterance_prior, "m1");
  CHECK(s1_m1.prob("u1") == 1.0);
  CHECK(s1_m1.prob("u2") == 0.0);
}

TEST_CASE("large alpha approaches the argmax utterance") {
  const Toy toy;
  const auto s1 = pragmatic_speaker(1e3, toy.lexicon, toy.meaning_prior,
                                    toy.utterance_prior, "m2");
  CHECK(s1.prob("u2") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s1.prob("u1") < 1e-200);
}

TEST_CASE("alpha zero flattens over expressible utterances") {
  const Toy toy;
  const auto s1 = pragmatic_speaker(0.0, toy.lexicon, toy.meaning_prior,
                                    toy.utterance_prior, "m2");
  CHECK(s1.prob("u1") == doctest::Approx(0.5));
  CHECK(s1.prob("u2") == doctest::Approx(0.5));
  // m1 is only expressible through u1, even at alpha = 0
  const auto s1_m1 = pragmatic_speaker(0.0, toy.lexicon, toy.meaning_prior,
                                       toy.utterance_prior, "m1");
  CHECK(s1_m1.prob("u1") == 1.0);
}

TEST_CASE("pragmatic listener hand recursion") {
  const Toy toy;
  const auto l1_u1 = pragmatic_listener(1.0, toy.lexicon, toy.meaning_prior,
                                        toy.utterance_prior, "u1");
  CHECK(l1_u1.prob("m1") == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(l1_u1.prob("m2") == doctest::Approx(0.25).epsilon(1e-12));

  const auto l1_u2 = pragmatic_listener(1.0, toy.lexicon, toy.meaning_prior,
                                        toy.utterance_prior, "u2");
  CHECK(l1_u2.prob("m1") == 0.0);
  CHECK(l1_u2.prob("m2") == 1.0);
}

TEST_CASE("pragmatic strengthening beats the literal listener") {
  const Toy toy;
  const double l0 =
      literal_listener(toy.lexicon, toy.meaning_prior, "u1").prob("m1");
  const double l1 = pragmatic_listener(1.0, toy.lexicon, toy.meaning_prior,
                                       toy.utterance_prior, "u1")
                        .prob("m1");
  CHECK(l1 > l0);
  CHECK(l0 == doctest::Approx(0.5));
  CHECK(l1 == doctest::Approx(0.75));
}

TEST_CASE("non-literal meanings get exactly zero mass") {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto instance = testing::random_instance(rng);
    for (const auto& u : instance.utterances->labels()) {
      std::optional<Categorical> l1;
      try {
        l1 = pragmatic_listener(instance.alpha, instance.lexicon,
                                instance.meaning_prior,
                                instance.utterance_prior, u);
      } catch (const AllZeroMassError&) {
        continue;
      }
      for (const auto& m : instance.meanings->labels()) {
        if (!instance.lexicon.compatible(m, u)) {
          CHECK(l1->prob(m) == 0.0);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("cost speaker with zero cost equals the uniform-prior speaker") {
  const Toy toy;
  const std::vector<double> kappa(2, 0.0);
  for (const char* m : {"m1", "m2"}) {
    const auto cost =
        cost_speaker(1.3, kappa, toy.lexicon, toy.meaning_prior, m);
    const auto plain =
        pragmatic_speaker(1.3, toy.lexicon, toy.meaning_prior,
                          Categorical::uniform(toy.utterances), m);
    for (std::size_t u = 0; u < 2; ++u) {
      CHECK(cost.prob(u) == doctest::Approx(plain.prob(u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log-prior costs recover the prior-weighted speaker") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const auto instance = testing::random_instance(rng);
    std::vector<double> kappa(instance.utterances->size());
    for (std::size_t u = 0; u < kappa.size(); ++u) {
      kappa[u] = -std::log(instance.utterance_prior.prob(u)) / instance.alpha;
    }
    for (const auto& m : instance.meanings->labels()) {
      std::optional<Categorical> with_prior;
      std::optional<Categorical> with_cost;
      try {
        with_prior = pragmatic_speaker(instance.alpha, instance.lexicon,
                                       instance.meaning_prior,
                                       instance.utterance_prior, m);
      } catch (const AllZeroMassError&) {
      }
      try {
        with_cost = cost_speaker(instance.alpha, kappa, instance.lexicon,
                                 instance.meaning_prior, m);
      } catch (const AllZeroMassError&) {
      }
      CHECK(with_prior.has_value() == with_cost.has_value());
      if (!with_prior) continue;
      for (std::size_t u = 0; u < instance.utterances->size(); ++u) {
        CHECK(std::abs(with_prior->prob(u) - with_cost->prob(u)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("a large cost suppresses its utterance") {
  const Toy toy;
  const std::vector<double> kappa = {0.0, 50.0};
  const auto s1 =
      cost_speaker(1.0, kappa, toy.lexicon, toy.meaning_prior, "m2");
  CHECK(s1.prob("u1") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s1.prob("u2") < 1e-15);
}

TEST_CASE("cost speaker validates costs") {
  const Toy toy;
  CHECK_THROWS_AS(
      cost_speaker(1.0, {0.0, -1.0}, toy.lexicon, toy.meaning_prior, "m1"),
      ModelError);
  CHECK_THROWS_AS(
      cost_speaker(1.0, {0.0}, toy.lexicon, toy.meaning_prior, "m1"),
      LengthMismatchError);
}

TEST_CASE("speaker mass on the most informative utterance grows with alpha") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 50; ++trial) {
    const auto instance = testing::random_instance(rng, 6, 6);
    const auto& m = instance.meanings->label(0);
    std::optional<Categorical> base;
    try {
      base = pragmatic_speaker(1.0, instance.lexicon, instance.meaning_prior,
                               Categorical::uniform(instance.utterances), m);
    } catch (const AllZeroMassError&) {
      continue;
    }
    const std::size_t best = base->argmax_index();
    double previous = -1.0;
    for (double alpha : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto s1 =
          pragmatic_speaker(alpha, instance.lexicon, instance.meaning_prior,
                            Categorical::uniform(instance.utterances), m);
      if (previous >= 0.0) {
        CHECK(s1.prob(best) >= previous - 1e-12);
      }
      previous = s1.prob(best);
    }
  }
}

TEST_CASE("prior sets validate their axes and drive the wrappers") {
  const Toy toy;
  const auto contexts = make_space(SpaceKind::kContext, {"c"});
  const auto meaning_table =
      ConditionalTable::constant({contexts}, toy.meaning_prior);
  const auto utterance_table =
      ConditionalTable::constant({contexts}, toy.utterance_prior);
  const PriorSet priors(meaning_table, utterance_table);
  const RsaConfig config{1.0};
  CHECK(pragmatic_listener(config, toy.lexicon, priors, "c", "u1").prob("m1") ==
        doctest::Approx(0.75));
  CHECK(literal_listener(toy.lexicon, priors, "c", "u1").prob("m1") ==
        doctest::Approx(0.5));
  CHECK(pragmatic_speaker(config, toy.lexicon, priors, "c", "m2").prob("u2") ==
        doctest::Approx(2.0 / 3));

  CHECK_THROWS_AS(PriorSet(meaning_table, meaning_table), DataError);
}
