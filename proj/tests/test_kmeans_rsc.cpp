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
#include <set>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"
#include "rsa2/kmeans.hpp"
#include "rsa2/rhetorical.hpp"
#include "rsa2/rng.hpp"
#include "rsa2/rsc.hpp"

using namespace rsa2;

namespace {

std::vector<std::vector<double>> two_blobs(std::mt19937_64& rng,
                                           std::size_t per_blob,
                                           std::vector<bool>* labels) {
  std::vector<std::vector<double>> points;
  labels->clear();
  for (std::size_t i = 0; i < per_blob; ++i) {
    points.push_back({uniform_in(rng, -0.5, 0.5), uniform_in(rng, -0.5, 0.5)});
    labels->push_back(false);
    points.push_back(
        {20.0 + uniform_in(rng, -0.5, 0.5), uniform_in(rng, -0.5, 0.5)});
    labels->push_back(true);
  }
  return points;
}

Scenario weather_scenario() {
  Scenario scenario;
  scenario.id = "blizzard-irony";
  scenario.context_text =
      "It has been snowing all day and the wind is howling.";
  scenario.speaker_name = "Maya";
  scenario.utterance = "The weather is amazing.";
  scenario.meanings = {
      ScenarioMeaning{"The weather really is wonderful.", MeaningRole::kLiteral},
      ScenarioMeaning{"The weather is dreadful.", MeaningRole::kNonLiteral},
      ScenarioMeaning{"Maya enjoys weather forecasts.", MeaningRole::kOverlap},
      ScenarioMeaning{"The soup is getting cold.", MeaningRole::kNonSequitur}};
  scenario.intended_role = MeaningRole::kNonLiteral;
  scenario.split = ScenarioSplit::kTest;
  return scenario;
}

}  // namespace

TEST_CASE("k-means recovers two separated blobs exactly") {
  std::mt19937_64 rng(8);
  std::vector<bool> labels;
  const auto points = two_blobs(rng, 20, &labels);
  const auto model = kmeans(points, 2, 10, 4);
  REQUIRE(model.assignment.size() == points.size());
  // identify which cluster holds the first blob, then demand purity
  const std::size_t blob0_cluster = model.assignment[0];
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] == labels[0]) {
      CHECK(model.assignment[i] == blob0_cluster);
    } else {
      CHECK(model.assignment[i] != blob0_cluster);
    }
  }
  for (const auto size : model.cluster_sizes()) CHECK(size == 20);
}

TEST_CASE("k equal to the point count gives zero inertia") {
  std::mt19937_64 rng(9);
  std::vector<std::vector<double>> points;
  for (int i = 0; i < 6; ++i) {
    points.push_back({static_cast<double>(3 * i), uniform_in(rng, 0.0, 1.0)});
  }
  const auto model = kmeans(points, points.size(), 10, 1);
  CHECK(model.inertia == doctest::Approx(0.0).epsilon(1e-15));
  std::set<std::size_t> used(model.assignment.begin(), model.assignment.end());
  CHECK(used.size() == points.size());
}

TEST_CASE("k equal to one returns the mean") {
  const std::vector<std::vector<double>> points = {
      {0.0, 0.0}, {2.0, 0.0}, {1.0, 3.0}};
  const auto model = kmeans(points, 1, 10, 7);
  CHECK(model.centroids[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.centroids[0][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("k-means rejects impossible cluster counts") {
  const std::vector<std::vector<double>> points = {{0.0}, {1.0}};
  CHECK_THROWS_AS(kmeans(points, 0, 10, 1), TooFewPointsError);
  CHECK_THROWS_AS(kmeans(points, 3, 10, 1), TooFewPointsError);
}

TEST_CASE("k-means is deterministic given the seed and never leaves a cluster empty") {
  std::mt19937_64 rng(10);
  std::vector<bool> labels;
  const auto points = two_blobs(rng, 10, &labels);
  const auto first = kmeans(points, 4, 10, 123);
  const auto second = kmeans(points, 4, 10, 123);
  CHECK(first.assignment == second.assignment);
  CHECK(first.inertia == second.inertia);
  for (const auto size : first.cluster_sizes()) CHECK(size > 0);
}

TEST_CASE("cluster-size posterior uses exact integer ratios") {
  ClusterModel model;
  model.k = 2;
  model.centroids = {{0.0}, {1.0}};
  model.assignment = {0, 0, 0, 1};
  const auto posterior = cluster_size_posterior(model, 4);
  CHECK(posterior.prob(0) == 0.75);
  CHECK(posterior.prob(1) == 0.25);
  CHECK(posterior.prob(0) + posterior.prob(1) == 1.0);

  ClusterModel single;
  single.k = 1;
  single.centroids = {{0.0}};
  single.assignment = {0, 0};
  CHECK(cluster_size_posterior(single, 2).prob(0) == 1.0);

  ClusterModel three;
  three.k = 3;
  three.centroids = {{0.0}, {1.0}, {2.0}};
  three.assignment = {0, 0, 1, 1, 2, 2, 2, 2};
  const auto p3 = cluster_size_posterior(three, 8);
  CHECK(p3.prob(0) == 0.25);
  CHECK(p3.prob(1) == 0.25);
  CHECK(p3.prob(2) == 0.5);
  CHECK(p3.prob(0) + p3.prob(1) + p3.prob(2) == 1.0);

  CHECK_THROWS_AS(cluster_size_posterior(model, 5), KeyMismatchError);
}

TEST_CASE("a self-cluster induces the all-ones rhetorical function") {
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b", "c"});
  const auto row = Categorical::from_weights(meanings, {0.5, 0.3, 0.2});
  const auto values = rsc_fr_values({0}, {row}, row);
  for (double v : values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-utterance cluster ratios") {
  // rows [0.8, 0.2] and [0.6, 0.4] pool to p_mc = [0.7, 0.3]; dividing by
  // the observed row [0.5, 0.5] gives [1.4, 0.6].
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b"});
  const std::vector<Categorical> rows = {Categorical(meanings, {0.8, 0.2}),
                                         Categorical(meanings, {0.6, 0.4})};
  const auto observed = Categorical(meanings, {0.5, 0.5});
  const auto values = rsc_fr_values({0, 1}, rows, observed);
  CHECK(values[0] == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("cluster values feed the conditioned listener as a p_mc recovery") {
  const auto contexts = make_space(SpaceKind::kContext, {"c"});
  const auto utterances = make_space(SpaceKind::kUtterance, {"u"});
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b"});
  const std::vector<Categorical> rows = {Categorical(meanings, {0.8, 0.2}),
                                         Categorical(meanings, {0.6, 0.4})};
  const auto observed = Categorical(meanings, {0.5, 0.5});
  auto values = rsc_fr_values({0, 1}, rows, observed);
  // rescale into [0,1]; the scale cancels in the normalized listener
  const double max = std::max(values[0], values[1]);
  for (double& v : values) v /= max;
  const auto fr = RhetoricalFunction::from_table("cluster-0", contexts,
                                                 meanings, utterances, values);
  const auto l0 = l0_conditioned(fr, observed, "c", "u");
  CHECK(l0.prob("a") == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(l0.prob("b") == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("division by a zero observed probability is rejected") {
  const auto meanings = make_space(SpaceKind::kMeaning, {"a", "b"});
  const std::vector<Categorical> rows = {Categorical(meanings, {0.8, 0.2})};
  const auto observed = Categorical(meanings, {1.0, 0.0});
  CHECK_THROWS_AS(rsc_fr_values({0}, rows, observed),
                  DivisionByZeroPriorError);
}

TEST_CASE("degenerate generation collapses the pipeline to one cluster") {
  const auto scenario = weather_scenario();
  MockProvider provider(3);
  provider.set_generation_fixture(
      scenario.generation_prefix(),
      std::vector<GeneratedUtterance>(10,
                                      GeneratedUtterance{scenario.utterance,
                                                         -2.0}));
  RscOptions options;
  options.k = 4;  // clamped to the single distinct utterance
  options.n_alternatives = 10;
  const auto report = rsc_pipeline(provider, scenario, options);
  REQUIRE(report.clusters.size() == 1);
  CHECK(report.alternatives.size() == 1);
  CHECK(report.cluster_posterior.prob(0) == 1.0);
  for (double v : report.clusters[0].fr_raw) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t m = 0; m < report.l1_marginal.size(); ++m) {
    CHECK(report.l1_marginal.prob(m) == report.clusters[0].l1.prob(m));
    CHECK(report.l0_marginal.prob(m) == report.clusters[0].l0.prob(m));
  }
}

TEST_CASE("the mock pipeline is deterministic and valid for several k") {
  const auto scenario = weather_scenario();
  for (std::size_t k : {2, 4, 8}) {
    MockProvider provider(17);
    RscOptions options;
    options.k = k;
    options.n_alternatives = 30;
    options.seed = 99;
    const auto report = rsc_pipeline(provider, scenario, options);

    MockProvider provider_again(17);
    const auto repeat = rsc_pipeline(provider_again, scenario, options);
    CHECK(report.to_json().dump() == repeat.to_json().dump());

    double total = 0.0;
    for (std::size_t m = 0; m < report.l1_marginal.size(); ++m) {
      total += report.l1_marginal.prob(m);
    }
    CHECK(std::abs(total - 1.0) <= kSumTolerance);
    CHECK(report.clusters.size() <= k);
    std::size_t assigned = 0;
    for (const auto& cluster : report.clusters) {
      CHECK(cluster.size > 0);
      assigned += cluster.size;
    }
    CHECK(assigned == report.alternatives.size());
  }
}

TEST_CASE("generation order does not change the report") {
  const auto scenario = weather_scenario();
  const std::vector<GeneratedUtterance> alts = {
      {"Gosh, this weather is so great!", -1.0},
      {"The weather is terrible.", -1.5},
      {"The weather is so bad.", -2.0},
      {"What a lovely day!", -2.5}};
  std::vector<GeneratedUtterance> reversed(alts.rbegin(), alts.rend());

  RscOptions options;
  options.k = 2;
  options.n_alternatives = 4;
  options.seed = 5;

  MockProvider forward_provider(21);
  forward_provider.set_generation_fixture(scenario.generation_prefix(), alts);
  const auto forward = rsc_pipeline(forward_provider, scenario, options);

  MockProvider reverse_provider(21);
  reverse_provider.set_generation_fixture(scenario.generation_prefix(),
                                          reversed);
  const auto backward = rsc_pipeline(reverse_provider, scenario, options);

  CHECK(forward.to_json().dump() == backward.to_json().dump());
}

TEST_CASE("provider concurrency does not change the report") {
  const auto scenario = weather_scenario();
  RscOptions serial;
  serial.k = 3;
  serial.n_alternatives = 20;
  serial.seed = 1;
  RscOptions parallel = serial;
  parallel.max_in_flight = 4;

  MockProvider provider_a(29);
  MockProvider provider_b(29);
  const auto serial_report = rsc_pipeline(provider_a, scenario, serial);
  const auto parallel_report = rsc_pipeline(provider_b, scenario, parallel);
  CHECK(serial_report.to_json().dump() == parallel_report.to_json().dump());
}
