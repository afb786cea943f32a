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
#include <random>

#include "instance_fuzz.hpp"
#include "rsa2/datasets.hpp"
#include "rsa2/errors.hpp"
#include "rsa2/rhetorical.hpp"
#include "rsa2/rsa.hpp"

using namespace rsa2;

namespace {

// Indicator function of a lexicon, as a rhetorical function.
RhetoricalFunction literal_fr(const SemanticLexicon& lexicon,
                              const LabelSpacePtr& contexts) {
  return RhetoricalFunction(
      "literal", contexts, lexicon.meanings(), lexicon.utterances(),
      [lexicon](const std::string&, const std::string& m, const std::string& u) {
        return lexicon.compatible(m, u) ? 1.0 : 0.0;
      });
}

const LabelSpacePtr kContext = make_space(SpaceKind::kContext, {"blizzard"});

struct Blizzard {
  WeatherDataset dataset = WeatherDataset::standard();
  StrategySet strategies = dataset.strategy_set();
  Categorical prior = Categorical::from_weights(
      dataset.states, {0.4, 0.3, 0.15, 0.1, 0.05});
  std::string amazing = "The weather is amazing.";
};

}  // namespace

TEST_CASE("literal indicator reduces the conditioned L0 to standard L0") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto instance = testing::random_instance(rng);
    const auto fr = literal_fr(instance.lexicon, kContext);
    for (const auto& u : instance.utterances->labels()) {
      const auto standard =
          literal_listener(instance.lexicon, instance.meaning_prior, u);
      const auto conditioned =
          l0_conditioned(fr, instance.meaning_prior, "blizzard", u);
      for (std::size_t m = 0; m < instance.meanings->size(); ++m) {
        CHECK(standard.prob(m) == conditioned.prob(m));
      }
    }
  }
}

TEST_CASE("irony concentrates the conditioned L0 on the mirrored state") {
  const Blizzard toy;
  const auto& irony = toy.strategies.function("irony");
  CHECK(irony.value("c8", "terrible", toy.amazing) == 1.0);
  CHECK(irony.value("c8", "amazing", toy.amazing) == 0.0);
  const auto l0 = l0_conditioned(irony, toy.prior, "c8", toy.amazing);
  CHECK(l0.prob("terrible") == 1.0);
  CHECK(l0.prob("amazing") == 0.0);
}

TEST_CASE("an all-ones rhetorical function returns the prior unchanged") {
  const Blizzard toy;
  const RhetoricalFunction ones(
      "ones", toy.dataset.contexts, toy.dataset.states, toy.dataset.utterances,
      [](const std::string&, const std::string&, const std::string&) {
        return 1.0;
      });
  const auto l0 = l0_conditioned(ones, toy.prior, "c1", toy.amazing);
  for (std::size_t m = 0; m < toy.prior.size(); ++m) {
    CHECK(l0.prob(m) == doctest::Approx(toy.prior.prob(m)).epsilon(1e-14));
  }
}

TEST_CASE("conditioned speaker with the literal indicator reduces to standard") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto instance = testing::random_instance(rng);
    const auto fr = literal_fr(instance.lexicon, kContext);
    for (const auto& m : instance.meanings->labels()) {
      Categorical standard = Categorical::uniform(instance.utterances);
      Categorical conditioned = standard;
      bool standard_ok = true;
      bool conditioned_ok = true;
      try {
        standard = pragmatic_speaker(instance.alpha, instance.lexicon,
                                     instance.meaning_prior,
                                     instance.utterance_prior, m);
      } catch (const AllZeroMassError&) {
        standard_ok = false;
      }
      try {
        conditioned = s1_conditioned(instance.alpha, fr, instance.meaning_prior,
                                     instance.utterance_prior, "blizzard", m);
      } catch (const AllZeroMassError&) {
        conditioned_ok = false;
      }
      REQUIRE(standard_ok == conditioned_ok);
      if (!standard_ok) continue;
      for (std::size_t u = 0; u < instance.utterances->size(); ++u) {
        CHECK(standard.prob(u) == doctest::Approx(conditioned.prob(u))
                                      .epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("halo speaker favours the round utterance for an off-by-one price") {
  // Independent evaluation of the case function over the ten-price space,
  // uniform priors, alpha = 1: for m = 501 the round neighbour u = 500 gets
  // L0 = 1/1.009; the five non-round utterances each get L0 = 0.1 (all their
  // f values sit at the 0.001 floor); the other round utterances get
  // 0.001/1.009. The speaker normalizes these ten values.
  const auto dataset = NumbersDataset::standard();
  const auto strategies = dataset.strategy_set();
  const auto& halo = strategies.function("halo");
  const auto prior = Categorical::uniform(dataset.meanings);
  const auto utterance_prior = Categorical::uniform(dataset.utterances);

  std::vector<double> expected_l0(dataset.utterances->size());
  for (std::size_t u = 0; u < dataset.utterances->size(); ++u) {
    double numer = 0.0;
    double denom = 0.0;
    for (std::size_t m = 0; m < dataset.meanings->size(); ++m) {
      const double f = numbers_fr("halo", std::stol(dataset.meanings->label(m)),
                                  std::stol(dataset.utterances->label(u)));
      denom += f;
      if (dataset.meanings->label(m) == "501") numer = f;
    }
    expected_l0[u] = numer / denom;
  }
  double expected_total = 0.0;
  for (double v : expected_l0) expected_total += v;

  const auto s1 = s1_conditioned(1.0, halo, prior, utterance_prior,
                                 "electric kettle", "501");
  for (std::size_t u = 0; u < dataset.utterances->size(); ++u) {
    CHECK(s1.prob(u) ==
          doctest::Approx(expected_l0[u] / expected_total).epsilon(1e-12));
  }
  CHECK(s1.argmax_label() == "500");
  CHECK(s1.prob("500") > 0.6);
}

TEST_CASE("alpha zero conditioned speaker is uniform over supported utterances") {
  const Blizzard toy;
  const auto& literal = toy.strategies.function("literal");
  const auto s1 =
      s1_conditioned(0.0, literal, toy.prior,
                     Categorical::uniform(toy.dataset.utterances), "c1", "ok");
  // only "The weather is ok." has L0 > 0 for meaning ok under the literal f
  CHECK(s1.prob("The weather is ok.") == 1.0);
}

TEST_CASE("conditioned pragmatic listener concentrates on the ironic meaning") {
  const Blizzard toy;
  const auto& irony = toy.strategies.function("irony");
  const auto l1 =
      l1_conditioned(1.0, irony, toy.prior,
                     Categorical::uniform(toy.dataset.utterances), "c8",
                     toy.amazing);
  // Hand recursion: irony maps each utterance to exactly one meaning, so
  // L0(terrible | amazing, irony) = 1, the speaker puts all mass on the
  // mirrored utterance, and L1 is the delta on terrible.
  CHECK(l1.prob("terrible") == doctest::Approx(1.0));
  CHECK(l1.argmax_label() == "terrible");
}

TEST_CASE("single-utterance space collapses L1 to the prior-weighted f") {
  const auto contexts = make_space(SpaceKind::kContext, {"c"});
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b", "z"});
  const auto utterances = make_space(SpaceKind::kUtterance, {"only"});
  const RhetoricalFunction fr(
      "soft", contexts, meanings, utterances,
      [](const std::string&, const std::string& m, const std::string&) {
        if (m == "a") return 0.9;
        if (m == "b") return 0.3;
        return 0.0;
      });
  const auto prior = Categorical::from_weights(meanings, {0.25, 0.5, 0.25});
  const auto l1 = l1_conditioned(1.0, fr, prior, Categorical::uniform(utterances),
                                 "c", "only");
  // S1(only|m) = 1 whenever f(m) > 0, so L1 is proportional to the prior
  // restricted to f's support.
  CHECK(l1.prob("a") == doctest::Approx(0.25 / 0.75).epsilon(1e-12));
  CHECK(l1.prob("b") == doctest::Approx(0.5 / 0.75).epsilon(1e-12));
  CHECK(l1.prob("z") == 0.0);
}

TEST_CASE("delta posterior marginalization returns that listener") {
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b"});
  const auto strategies = make_space(SpaceKind::kStrategy, {"r1", "r2"});
  const auto first = Categorical::from_weights(meanings, {0.9, 0.1});
  const auto second = Categorical::from_weights(meanings, {0.2, 0.8});
  const auto marginal =
      l1_marginal({first, second}, Categorical::delta(strategies, "r1"));
  CHECK(marginal.prob(0) == doctest::Approx(first.prob(0)).epsilon(1e-15));
  CHECK(marginal.prob(1) == doctest::Approx(first.prob(1)).epsilon(1e-15));
}

TEST_CASE("uniform posterior over identical listeners is idempotent") {
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b"});
  const auto strategies = make_space(SpaceKind::kStrategy, {"r1", "r2"});
  const auto listener = Categorical::from_weights(meanings, {0.7, 0.3});
  const auto marginal =
      l1_marginal({listener, listener}, Categorical::uniform(strategies));
  CHECK(marginal.prob(0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(marginal.prob(1) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("single literal strategy marginal equals the standard listener") {
  std::mt19937_64 rng(77);
  const auto one_strategy = make_space(SpaceKind::kStrategy, {"literal"});
  for (int trial = 0; trial < 50; ++trial) {
    const auto instance = testing::random_instance(rng);
    const auto fr = literal_fr(instance.lexicon, kContext);
    for (const auto& u : instance.utterances->labels()) {
      bool conditioned_ok = true;
      bool standard_ok = true;
      Categorical standard = Categorical::uniform(instance.meanings);
      Categorical marginal = standard;
      try {
        standard = pragmatic_listener(instance.alpha, instance.lexicon,
                                      instance.meaning_prior,
                                      instance.utterance_prior, u);
      } catch (const AllZeroMassError&) {
        standard_ok = false;
      }
      try {
        marginal = l1_marginal(
            {l1_conditioned(instance.alpha, fr, instance.meaning_prior,
                            instance.utterance_prior, "blizzard", u)},
            Categorical::uniform(one_strategy));
      } catch (const AllZeroMassError&) {
        conditioned_ok = false;
      }
      REQUIRE(standard_ok == conditioned_ok);
      if (!standard_ok) continue;
      for (std::size_t m = 0; m < instance.meanings->size(); ++m) {
        CHECK(standard.prob(m) == marginal.prob(m));
      }
    }
  }
}

TEST_CASE("numbers case function values") {
  CHECK(numbers_fr("hyperbole", 50, 500) == 1.0);
  CHECK(numbers_fr("halo", 501, 500) == 1.0);
  CHECK(numbers_fr("literal", 50, 50) == 1.0);
  CHECK(numbers_fr("literal", 50, 51) == 0.001);
  CHECK(numbers_fr("understatement", 5000, 50) == 1.0);
  CHECK(numbers_fr("understatement", 50, 5000) == 0.001);
  CHECK(numbers_fr("hyperbole", 5000, 5001) == 0.001);  // difference <= 10
}

TEST_CASE("halo is directional: the utterance must be the round number") {
  CHECK(numbers_fr("halo", 1001, 1000) == 1.0);
  CHECK(numbers_fr("halo", 1000, 1001) == 0.001);
  CHECK(numbers_fr("halo", 5001, 5000) == 1.0);
  CHECK(numbers_fr("halo", 5000, 5001) == 0.001);
}

TEST_CASE("numbers case function rejects labels outside the price space") {
  CHECK_THROWS_AS(numbers_fr("literal", 49, 50), LabelOutOfSpaceError);
  CHECK_THROWS_AS(numbers_fr("literal", 50, 499), LabelOutOfSpaceError);
  CHECK_THROWS_AS(numbers_fr("metaphor", 50, 50), LabelOutOfSpaceError);
}

TEST_CASE("indicator posterior snaps to the argmax strategy") {
  const auto strategies = make_space(SpaceKind::kStrategy, {"irony", "literal"});
  const auto snapped =
      indicator_posterior(Categorical(strategies, {0.88, 0.12}));
  CHECK(snapped.prob("irony") == 1.0);
  CHECK(snapped.prob("literal") == 0.0);
  const auto other = indicator_posterior(Categorical(strategies, {0.45, 0.55}));
  CHECK(other.prob("literal") == 1.0);
  const auto tie = indicator_posterior(Categorical(strategies, {0.5, 0.5}));
  CHECK(tie.prob("irony") == 1.0);  // lowest index wins
}

TEST_CASE("implicit rhetorical function from elicited distributions") {
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b"});
  SUBCASE("identical distributions give the all-ones function") {
    const auto p = Categorical::from_weights(meanings, {0.6, 0.4});
    const auto f = implicit_fr(p, p);
    CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("ratio arithmetic") {
    const auto posterior = Categorical(meanings, {0.8, 0.2});
    const auto prior = Categorical(meanings, {0.5, 0.5});
    const auto f = implicit_fr(posterior, prior);
    CHECK(f[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("zero prior entries are rejected") {
    const auto posterior = Categorical(meanings, {1.0, 0.0});
    const auto prior = Categorical(meanings, {1.0, 0.0});
    CHECK_THROWS_AS(implicit_fr(posterior, prior), DivisionByZeroPriorError);
  }
}

TEST_CASE("implicit function round-trips through the conditioned listener") {
  std::mt19937_64 rng(505);
  const auto contexts = make_space(SpaceKind::kContext, {"c"});
  const auto utterances = make_space(SpaceKind::kUtterance, {"u"});
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 6);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i));
    const auto meanings = make_space(SpaceKind::kMeaning, labels);
    auto positive = [&] {
      std::vector<double> w(n);
      for (double& x : w) x = uniform_in(rng, 0.05, 1.0);
      return Categorical::from_weights(meanings, w);
    };
    const auto posterior = positive();
    const auto prior = positive();
    const auto f = implicit_fr(posterior, prior);
    for (double v : f) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    std::vector<double> table(n);
    for (std::size_t m = 0; m < n; ++m) table[m] = f[m];
    const auto fr = RhetoricalFunction::from_table("implicit", contexts,
                                                   meanings, utterances, table);
    const auto recovered = l0_conditioned(fr, prior, "c", "u");
    for (std::size_t m = 0; m < n; ++m) {
      CHECK(std::abs(recovered.prob(m) - posterior.prob(m)) <= 1e-9);
    }
  }
}

TEST_CASE("rhetorical functions validate their range and spaces") {
  const auto contexts = make_space(SpaceKind::kContext, {"c"});
  const auto meanings = make_space(SpaceKind::kMeaning, {"a"});
  const auto utterances = make_space(SpaceKind::kUtterance, {"u"});
  CHECK_THROWS_AS(RhetoricalFunction::from_table("bad", contexts, meanings,
                                                 utterances, {1.5}),
                  ModelError);
  const RhetoricalFunction out_of_range(
      "bad", contexts, meanings, utterances,
      [](const std::string&, const std::string&, const std::string&) {
        return -0.1;
      });
  CHECK_THROWS_AS(out_of_range.value("c", "a", "u"), ModelError);
  CHECK_THROWS_AS(out_of_range.value("c", "missing", "u"),
                  LabelOutOfSpaceError);
}

TEST_CASE("strategy sets enforce the label-function bijection") {
  const auto dataset = WeatherDataset::standard();
  const auto strategies = dataset.strategy_set();
  CHECK(strategies.strategies()->size() == 2);
  CHECK(strategies.function("literal").strategy() == "literal");
  CHECK_THROWS_AS(strategies.function("halo"), LabelOutOfSpaceError);

  // misaligned labels
  const auto wrong_space = make_space(SpaceKind::kStrategy, {"irony", "literal"});
  std::vector<RhetoricalFunction> functions = {
      strategies.function("literal"), strategies.function("irony")};
  CHECK_THROWS_AS(StrategySet(wrong_space, functions), DataError);
}
