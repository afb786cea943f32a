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

#include "rsa2/provider.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"
#include "rsa2/rng.hpp"

namespace rsa2 {

namespace {

void check_query(const McqQuery& query) {
  if (query.options.size() < 2) {
    throw ProviderError("MCQ queries need at least two options");
  }
  if (query.shuffles < 1) {
    throw ProviderError("MCQ queries need at least one shuffle");
  }
  std::set<std::string> distinct(query.options.begin(), query.options.end());
  if (distinct.size() != query.options.size()) {
    throw ProviderError("MCQ options must be distinct");
  }
}

// Distinct permutations of [0, n): all of them in lexicographic order when
// few enough, otherwise `count` seeded samples.
std::vector<std::vector<std::size_t>> permutations_for(std::size_t n,
                                                       int shuffles,
                                                       std::uint64_t seed) {
  const std::size_t total = mcq_permutation_count(n, shuffles);
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);

  std::size_t factorial = 1;
  bool small = true;
  for (std::size_t i = 2; i <= n && small; ++i) {
    factorial *= i;
    if (factorial > static_cast<std::size_t>(shuffles) * 64) small = false;
  }
  if (small && factorial <= static_cast<std::size_t>(shuffles)) {
    std::vector<std::vector<std::size_t>> all;
    auto perm = identity;
    do {
      all.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return all;
  }

  std::mt19937_64 rng(seed);
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> sampled;
  while (sampled.size() < total) {
    auto perm = identity;
    seeded_shuffle(perm, rng);
    if (seen.insert(perm).second) {
      sampled.push_back(std::move(perm));
    }
  }
  return sampled;
}

std::string trimmed(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return text.substr(begin, end - begin);
}

double log_sum_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

std::vector<std::string> token_bag(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

}  // namespace

std::size_t mcq_permutation_count(std::size_t option_count, int shuffles) {
  std::size_t factorial = 1;
  for (std::size_t i = 2; i <= option_count; ++i) {
    factorial *= i;
    if (factorial >= static_cast<std::size_t>(shuffles)) {
      return static_cast<std::size_t>(shuffles);
    }
  }
  return factorial;
}

Categorical mcq_distribution(ProbabilityProvider& provider,
                             const McqQuery& query) {
  check_query(query);
  const auto permutations =
      permutations_for(query.options.size(), query.shuffles, query.seed);

  std::vector<double> mean(query.options.size(), 0.0);
  for (const auto& perm : permutations) {
    std::vector<std::string> presented(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      presented[i] = query.options[perm[i]];
    }
    auto probs = provider.mcq_option_probabilities(query, presented);
    if (probs.size() != perm.size()) {
      throw ProtocolError("provider returned " + std::to_string(probs.size()) +
                          " probabilities for " + std::to_string(perm.size()) +
                          " options");
    }
    double total = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ProtocolError("provider returned an invalid probability");
      }
      total += p;
    }
    if (total <= 0.0) {
      throw ProtocolError("provider returned an all-zero option distribution");
    }
    for (std::size_t i = 0; i < perm.size(); ++i) {
      mean[perm[i]] += probs[i] / total;
    }
  }
  for (double& p : mean) p /= static_cast<double>(permutations.size());
  return Categorical::from_weights(
      make_space(query.option_kind, query.options), mean);
}

std::vector<GeneratedUtterance> generate_alternatives(
    ProbabilityProvider& provider, const GenerationQuery& query) {
  if (query.n < 1) {
    throw ProviderError("generation queries need n >= 1");
  }
  const auto raw = provider.generate(query);

  std::vector<GeneratedUtterance> merged;
  std::map<std::string, std::size_t> index;
  for (const auto& candidate : raw) {
    std::string text = candidate.text;
    const auto quote = text.find('"');
    if (quote != std::string::npos) text = text.substr(0, quote);
    text = trimmed(text);
    if (text.empty()) continue;
    if (!std::isfinite(candidate.loglik)) {
      throw ProtocolError("generation log-likelihood is not finite");
    }
    auto it = index.find(text);
    if (it == index.end()) {
      index.emplace(text, merged.size());
      merged.push_back(GeneratedUtterance{text, candidate.loglik});
    } else {
      merged[it->second].loglik =
          log_sum_exp(merged[it->second].loglik, candidate.loglik);
    }
  }
  if (merged.empty()) {
    throw EmptyGenerationError("provider produced no usable utterances");
  }
  return merged;
}

std::vector<double> generation_prior(
    const std::vector<GeneratedUtterance>& utterances) {
  if (utterances.empty()) {
    throw EmptyGenerationError("cannot build a prior over zero utterances");
  }
  double max_ll = utterances.front().loglik;
  for (const auto& u : utterances) max_ll = std::max(max_ll, u.loglik);
  std::vector<double> prior(utterances.size());
  double total = 0.0;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    prior[i] = std::exp(utterances[i].loglik - max_ll);
    total += prior[i];
  }
  for (double& p : prior) p /= total;
  return prior;
}

// --- MockProvider -------------------------------------------------------------

MockProvider::MockProvider(std::uint64_t seed, std::size_t embedding_dim)
    : seed_(seed), embedding_dim_(embedding_dim) {}

ProviderCapabilities MockProvider::capabilities() const {
  return ProviderCapabilities{true, true, true};
}

std::string MockProvider::condition_key(const McqQuery& query) {
  std::string key = query.context_text;
  if (query.utterance) key += " | " + *query.utterance;
  if (query.strategy_framing) key += " | " + *query.strategy_framing;
  return key;
}

double MockProvider::option_weight(const std::string& condition_key,
                                   const std::string& option) const {
  auto fixture = mcq_fixtures_.find(condition_key);
  if (fixture != mcq_fixtures_.end()) {
    auto it = fixture->second.find(option);
    if (it == fixture->second.end()) {
      throw ProviderError("mock fixture has no weight for option \"" + option +
                          "\"");
    }
    return it->second;
  }
  // Content-dependent, order-independent pseudo-score in (0.2, 1.2).
  const std::uint64_t h = fnv1a(option, fnv1a(condition_key, seed_ + 101));
  return 0.2 + static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<double> MockProvider::mcq_option_probabilities(
    const McqQuery& query, const std::vector<std::string>& presented) {
  mcq_calls_.fetch_add(1);
  const std::string key = condition_key(query);
  std::vector<double> weights(presented.size());
  for (std::size_t i = 0; i < presented.size(); ++i) {
    weights[i] = option_weight(key, presented[i]);
    if (i < position_bias_.size()) weights[i] *= position_bias_[i];
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<GeneratedUtterance> MockProvider::generate(
    const GenerationQuery& query) {
  generate_calls_.fetch_add(1);
  auto fixture = generation_fixtures_.find(query.context_prefix);
  if (fixture != generation_fixtures_.end()) {
    return fixture->second;
  }
  // Hash-derived pseudo-utterances: stable for a given prefix and seed.
  std::mt19937_64 rng(fnv1a(query.context_prefix, seed_ + 577) ^ query.seed);
  static const char* kHeads[] = {"It is", "That looks", "This seems",
                                 "Honestly it is", "What a"};
  static const char* kTails[] = {"fine", "great", "awful", "strange",
                                 "typical", "remarkable"};
  std::vector<GeneratedUtterance> out;
  out.reserve(static_cast<std::size_t>(query.n));
  for (int i = 0; i < query.n; ++i) {
    const auto head = kHeads[uniform_below(rng, 5)];
    const auto tail = kTails[uniform_below(rng, 6)];
    const std::string text = std::string(head) + " " + tail + ".";
    out.push_back(GeneratedUtterance{
        text, score_generation(query.context_prefix, text)});
  }
  return out;
}

double MockProvider::score_generation(const std::string& context_prefix,
                                      const std::string& text) {
  // Deterministic pseudo log-likelihood in (-6, -1).
  const std::uint64_t h = fnv1a(text, fnv1a(context_prefix, seed_ + 919));
  return -1.0 - 5.0 * static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<double> MockProvider::embed(const std::string& utterance) {
  embed_calls_.fetch_add(1);
  auto fixture = embedding_fixtures_.find(utterance);
  if (fixture != embedding_fixtures_.end()) {
    return fixture->second;
  }
  // Bag-of-tokens hash embedding: shared tokens pull vectors together.
  std::vector<double> vec(embedding_dim_, 0.0);
  const auto tokens = token_bag(utterance);
  for (const auto& token : tokens) {
    std::mt19937_64 rng(fnv1a(token, seed_ + 1327));
    for (double& component : vec) {
      component += uniform_in(rng, -1.0, 1.0);
    }
  }
  if (!tokens.empty()) {
    for (double& component : vec) {
      component /= static_cast<double>(tokens.size());
    }
  }
  return vec;
}

void MockProvider::set_mcq_weights(const std::string& condition_key,
                                   std::map<std::string, double> option_weights) {
  mcq_fixtures_[condition_key] = std::move(option_weights);
}

void MockProvider::set_generation_fixture(
    const std::string& context_prefix,
    std::vector<GeneratedUtterance> utterances) {
  generation_fixtures_[context_prefix] = std::move(utterances);
}

void MockProvider::set_embedding(const std::string& utterance,
                                 std::vector<double> vector) {
  embedding_fixtures_[utterance] = std::move(vector);
}

void MockProvider::set_position_bias(std::vector<double> bias) {
  position_bias_ = std::move(bias);
}

void MockProvider::load_fixtures(const nlohmann::json& j) {
  if (j.contains("mcq")) {
    for (const auto& [condition, weights] : j.at("mcq").items()) {
      std::map<std::string, double> parsed;
      for (const auto& [option, w] : weights.items()) {
        parsed[option] = w.get<double>();
      }
      set_mcq_weights(condition, std::move(parsed));
    }
  }
  if (j.contains("generate")) {
    for (const auto& [prefix, list] : j.at("generate").items()) {
      std::vector<GeneratedUtterance> parsed;
      for (const auto& entry : list) {
        parsed.push_back(GeneratedUtterance{entry.at("text").get<std::string>(),
                                            entry.at("loglik").get<double>()});
      }
      set_generation_fixture(prefix, std::move(parsed));
    }
  }
  if (j.contains("embed")) {
    for (const auto& [utterance, vec] : j.at("embed").items()) {
      set_embedding(utterance, vec.get<std::vector<double>>());
    }
  }
}

}  // namespace rsa2
