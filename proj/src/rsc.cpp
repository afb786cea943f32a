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

#include "rsa2/rsc.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"
#include "rsa2/rhetorical.hpp"
#include "rsa2/rng.hpp"

namespace rsa2 {

namespace {

// Deterministic bounded-concurrency map: results land in input order no
// matter which provider call finishes first.
template <typename Fn>
auto parallel_map(std::size_t count, int max_in_flight, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn, std::size_t>> {
  using Result = std::invoke_result_t<Fn, std::size_t>;
  std::vector<Result> results(count);
  if (max_in_flight <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), count);
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
  return results;
}

// Clusters renumbered by their lowest member index so reports are stable.
void canonicalize_cluster_ids(ClusterModel& model) {
  std::vector<std::size_t> first_member(model.k, model.assignment.size());
  for (std::size_t i = 0; i < model.assignment.size(); ++i) {
    first_member[model.assignment[i]] =
        std::min(first_member[model.assignment[i]], i);
  }
  std::vector<std::size_t> order(model.k);
  for (std::size_t c = 0; c < model.k; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return first_member[a] < first_member[b];
  });
  std::vector<std::size_t> renumber(model.k);
  for (std::size_t c = 0; c < model.k; ++c) renumber[order[c]] = c;
  for (auto& cluster : model.assignment) cluster = renumber[cluster];
  std::vector<std::vector<double>> centroids(model.k);
  for (std::size_t c = 0; c < model.k; ++c) {
    centroids[renumber[c]] = std::move(model.centroids[c]);
  }
  model.centroids = std::move(centroids);
}

}  // namespace

Categorical cluster_size_posterior(const ClusterModel& model,
                                   std::size_t total) {
  if (total != model.assignment.size()) {
    throw KeyMismatchError("posterior over " + std::to_string(total) +
                           " utterances but " +
                           std::to_string(model.assignment.size()) +
                           " assignments");
  }
  std::vector<std::string> labels;
  labels.reserve(model.k);
  for (std::size_t c = 0; c < model.k; ++c) {
    labels.push_back("cluster-" + std::to_string(c));
  }
  const auto sizes = model.cluster_sizes();
  std::vector<double> weights(sizes.size());
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    weights[c] = static_cast<double>(sizes[c]);
  }
  return Categorical::from_weights(
      make_space(SpaceKind::kStrategy, std::move(labels)), weights);
}

std::vector<double> rsc_fr_values(
    const std::vector<std::size_t>& member_indices,
    const std::vector<Categorical>& meaning_given_alternative,
    const Categorical& meaning_given_observed) {
  if (member_indices.empty()) {
    throw EmptyClusterError("cluster has no member utterances");
  }
  const std::size_t num_meanings = meaning_given_observed.size();
  std::vector<double> pooled(num_meanings, 0.0);
  double total = 0.0;
  for (std::size_t index : member_indices) {
    const Categorical& row = meaning_given_alternative.at(index);
    if (!same_space(row.space(), meaning_given_observed.space())) {
      throw SpaceMismatchError("alternative rows must share the meaning space");
    }
    for (std::size_t m = 0; m < num_meanings; ++m) {
      pooled[m] += row.prob(m);
      total += row.prob(m);
    }
  }
  std::vector<double> values(num_meanings, 0.0);
  for (std::size_t m = 0; m < num_meanings; ++m) {
    const double p_mc = pooled[m] / total;
    const double denom = meaning_given_observed.prob(m);
    if (denom <= 0.0) {
      throw DivisionByZeroPriorError(
          "P(m|c,u) is zero for meaning \"" +
          meaning_given_observed.space()->label(m) + "\"");
    }
    values[m] = p_mc / denom;
  }
  return values;
}

RscReport rsc_pipeline(ProbabilityProvider& provider, const Scenario& scenario,
                       const RscOptions& options) {
  const std::string prefix = scenario.generation_prefix();

  // 1. Generate, truncate and deduplicate the alternative set; the observed
  //    utterance is always a member and is scored when not generated.
  GenerationQuery gen_query;
  gen_query.context_prefix = prefix;
  gen_query.n = options.n_alternatives;
  gen_query.seed = options.seed;
  const auto generated = generate_alternatives(provider, gen_query);
  std::map<std::string, double> loglik_of;
  for (const auto& candidate : generated) {
    loglik_of.emplace(candidate.text, candidate.loglik);
  }
  if (loglik_of.find(scenario.utterance) == loglik_of.end()) {
    loglik_of.emplace(scenario.utterance,
                      provider.score_generation(prefix, scenario.utterance));
  }

  // std::map iteration gives the canonical lexicographic order.
  std::vector<std::string> alternatives;
  std::vector<GeneratedUtterance> scored;
  for (const auto& [text, loglik] : loglik_of) {
    alternatives.push_back(text);
    scored.push_back(GeneratedUtterance{text, loglik});
  }
  const std::vector<double> utterance_prior_probs = generation_prior(scored);

  // 2. Embed and cluster.
  const auto embeddings =
      parallel_map(alternatives.size(), options.max_in_flight,
                   [&](std::size_t i) { return provider.embed(alternatives[i]); });
  const std::size_t k_eff =
      std::min<std::size_t>(options.k, alternatives.size());
  ClusterModel model = kmeans(embeddings, k_eff, 10, options.seed);
  canonicalize_cluster_ids(model);
  Categorical cluster_posterior =
      cluster_size_posterior(model, alternatives.size());

  // 3. Elicit the meaning prior P(m|c) and one row P(m|c,u') per alternative.
  std::vector<std::string> option_texts;
  for (const auto& meaning : scenario.meanings) {
    option_texts.push_back(meaning.text);
  }
  auto make_query = [&](const std::optional<std::string>& utterance) {
    McqQuery query;
    query.context_text = scenario.context_text;
    query.utterance = utterance;
    query.options = option_texts;
    query.seed = options.seed ^ fnv1a(utterance.value_or(""));
    return query;
  };

  const Categorical elicited_prior =
      mcq_distribution(provider, make_query(std::nullopt));
  const Categorical meaning_prior =
      options.use_meaning_prior ? elicited_prior
                                : Categorical::uniform(elicited_prior.space());

  const auto meaning_rows_opt = parallel_map(
      alternatives.size(), options.max_in_flight,
      [&](std::size_t i) -> std::optional<Categorical> {
        const McqQuery query = make_query(scenario.speaker_name + " said, \"" +
                                          alternatives[i] + "\"");
        return mcq_distribution(provider, query);
      });
  std::vector<Categorical> meaning_rows;
  meaning_rows.reserve(meaning_rows_opt.size());
  for (const auto& row : meaning_rows_opt) meaning_rows.push_back(*row);

  const std::size_t observed_index = static_cast<std::size_t>(
      std::find(alternatives.begin(), alternatives.end(), scenario.utterance) -
      alternatives.begin());
  const Categorical& observed_row = meaning_rows[observed_index];

  // 4. Per-cluster rhetorical functions and conditioned listeners. The
  //    speaker normalizes over the full alternative set with the
  //    generation-derived utterance prior.
  const auto context_space =
      make_space(SpaceKind::kContext, {scenario.context_text});
  const auto utterance_space = make_space(SpaceKind::kUtterance, alternatives);
  const auto& meaning_space = meaning_prior.space();
  const Categorical utterance_prior =
      Categorical::from_weights(utterance_space, utterance_prior_probs);

  std::vector<std::vector<std::size_t>> members(model.k);
  for (std::size_t i = 0; i < model.assignment.size(); ++i) {
    members[model.assignment[i]].push_back(i);
  }

  std::vector<RscClusterReport> cluster_reports;
  std::vector<Categorical> l0_rows;
  std::vector<Categorical> l1_rows;
  for (std::size_t c = 0; c < model.k; ++c) {
    std::vector<std::string> member_texts;
    for (std::size_t i : members[c]) member_texts.push_back(alternatives[i]);

    const auto fr_raw = rsc_fr_values(members[c], meaning_rows, observed_row);

    // Rescale each utterance column by its maximum so the dense table
    // satisfies the [0,1] contract; the scale cancels inside each normalized
    // listener.
    std::vector<double> table(meaning_space->size() * utterance_space->size());
    for (std::size_t u = 0; u < utterance_space->size(); ++u) {
      const auto column =
          rsc_fr_values(members[c], meaning_rows, meaning_rows[u]);
      double column_max = 0.0;
      for (double v : column) column_max = std::max(column_max, v);
      for (std::size_t m = 0; m < meaning_space->size(); ++m) {
        table[m * utterance_space->size() + u] =
            column_max > 0.0 ? column[m] / column_max : 0.0;
      }
    }
    std::vector<double> fr_scaled(meaning_space->size());
    for (std::size_t m = 0; m < meaning_space->size(); ++m) {
      fr_scaled[m] = table[m * utterance_space->size() + observed_index];
    }

    const RhetoricalFunction fr = RhetoricalFunction::from_table(
        "cluster-" + std::to_string(c), context_space, meaning_space,
        utterance_space, std::move(table));
    Categorical l0 = l0_conditioned(fr, meaning_prior, scenario.context_text,
                                    scenario.utterance);
    Categorical l1 =
        l1_conditioned(options.alpha, fr, meaning_prior, utterance_prior,
                       scenario.context_text, scenario.utterance);
    l0_rows.push_back(l0);
    l1_rows.push_back(l1);
    cluster_reports.push_back(RscClusterReport{
        std::move(member_texts), members[c].size(), fr_raw, std::move(fr_scaled),
        std::move(l0), std::move(l1)});
  }

  Categorical l0_marg = l1_marginal(l0_rows, cluster_posterior);
  Categorical l1_marg = l1_marginal(l1_rows, cluster_posterior);
  return RscReport{scenario.id,
                   std::move(alternatives),
                   utterance_prior_probs,
                   std::move(cluster_posterior),
                   std::move(cluster_reports),
                   std::move(l0_marg),
                   std::move(l1_marg)};
}

nlohmann::json RscReport::to_json() const {
  auto dist_json = [](const Categorical& dist) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < dist.size(); ++i) {
      obj[dist.space()->label(i)] = dist.prob(i);
    }
    return obj;
  };
  nlohmann::json clusters_json = nlohmann::json::array();
  for (const auto& cluster : clusters) {
    clusters_json.push_back({{"members", cluster.members},
                             {"size", cluster.size},
                             {"fr_raw", cluster.fr_raw},
                             {"fr_scaled", cluster.fr_scaled},
                             {"l0", dist_json(cluster.l0)},
                             {"l1", dist_json(cluster.l1)}});
  }
  return nlohmann::json{{"scenario_id", scenario_id},
                        {"alternatives", alternatives},
                        {"utterance_prior", utterance_prior},
                        {"cluster_posterior", dist_json(cluster_posterior)},
                        {"clusters", std::move(clusters_json)},
                        {"l0_marginal", dist_json(l0_marginal)},
                        {"l1_marginal", dist_json(l1_marginal)}};
}

}  // namespace rsa2
