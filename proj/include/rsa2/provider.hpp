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

#ifndef RSA2_PROVIDER_HPP_
#define RSA2_PROVIDER_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/categorical.hpp"

namespace rsa2 {

struct ProviderCapabilities {
  bool mcq_probabilities = false;
  bool generate_alternatives = false;
  bool embeddings = false;
};

// A multiple-choice probability elicitation: the provider reads the condition
// (context, optional utterance, optional strategy framing), presents the
// options and reports one probability per option.
struct McqQuery {
  std::string context_text;
  std::optional<std::string> utterance;
  std::optional<std::string> strategy_framing;
  std::vector<std::string> options;
  SpaceKind option_kind = SpaceKind::kMeaning;
  int shuffles = 10;
  std::uint64_t seed = 0;
};

// Free-form continuation sampling from a context prefix that ends at the
// opening quotation mark.
struct GenerationQuery {
  std::string context_prefix;
  int n = 50;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

struct GeneratedUtterance {
  std::string text;
  double loglik;
};

// Uniform interface for externally estimated probabilities, generated
// alternative utterances and utterance embeddings. Implementations must be
// safe to call from multiple threads.
class ProbabilityProvider {
 public:
  virtual ~ProbabilityProvider() = default;

  virtual ProviderCapabilities capabilities() const = 0;

  // One elicitation round: probabilities for the options exactly as
  // presented (already renormalized over the option set). Shuffle averaging
  // happens above this call, in mcq_distribution.
  virtual std::vector<double> mcq_option_probabilities(
      const McqQuery& query, const std::vector<std::string>& presented) = 0;

  virtual std::vector<GeneratedUtterance> generate(
      const GenerationQuery& query) = 0;

  // Generation log-likelihood of a specific continuation of the prefix.
  virtual double score_generation(const std::string& context_prefix,
                                  const std::string& text) = 0;

  virtual std::vector<double> embed(const std::string& utterance) = 0;
};

// Averages option probabilities over min(query.shuffles, #permutations)
// distinct seeded permutations of the presented order, aligns them back to
// the query's option order and renormalizes the mean.
Categorical mcq_distribution(ProbabilityProvider& provider,
                             const McqQuery& query);

// Number of permutations mcq_distribution will issue for a query; exposed so
// callers can budget provider traffic.
std::size_t mcq_permutation_count(std::size_t option_count, int shuffles);

// Runs the provider's sampler, truncates each continuation at the first
// closing quote, trims whitespace and merges duplicates by log-sum-exp of
// their log-likelihoods. Order follows first occurrence.
std::vector<GeneratedUtterance> generate_alternatives(
    ProbabilityProvider& provider, const GenerationQuery& query);

// Softmax of the utterances' log-likelihoods: the generation-derived
// utterance prior over exactly the returned set.
std::vector<double> generation_prior(
    const std::vector<GeneratedUtterance>& utterances);

// Deterministic provider for tests and offline runs. Scores depend only on
// the condition and the option text (never on presentation order), so
// shuffle averaging is exactly permutation-equivariant. Fixtures override
// the hash-derived defaults.
class MockProvider : public ProbabilityProvider {
 public:
  explicit MockProvider(std::uint64_t seed = 0, std::size_t embedding_dim = 16);

  ProviderCapabilities capabilities() const override;
  std::vector<double> mcq_option_probabilities(
      const McqQuery& query, const std::vector<std::string>& presented) override;
  std::vector<GeneratedUtterance> generate(const GenerationQuery& query) override;
  double score_generation(const std::string& context_prefix,
                          const std::string& text) override;
  std::vector<double> embed(const std::string& utterance) override;

  // fixtures
  void set_mcq_weights(const std::string& condition_key,
                       std::map<std::string, double> option_weights);
  void set_generation_fixture(const std::string& context_prefix,
                              std::vector<GeneratedUtterance> utterances);
  void set_embedding(const std::string& utterance, std::vector<double> vector);
  // Multiplicative per-position factors, for exercising the unshuffling
  // logic in tests. Breaks order invariance on purpose.
  void set_position_bias(std::vector<double> bias);

  // Fixture file: {"mcq": {"<condition>": {"<option>": w, ...}},
  //                "generate": {"<prefix>": [{"text":..., "loglik":...}]},
  //                "embed": {"<utterance>": [..]}}
  void load_fixtures(const nlohmann::json& j);

  int mcq_calls() const { return mcq_calls_.load(); }
  int generate_calls() const { return generate_calls_.load(); }
  int embed_calls() const { return embed_calls_.load(); }

  // The condition key used for fixture lookups and default scoring.
  static std::string condition_key(const McqQuery& query);

 private:
  double option_weight(const std::string& condition_key,
                       const std::string& option) const;

  std::uint64_t seed_;
  std::size_t embedding_dim_;
  std::map<std::string, std::map<std::string, double>> mcq_fixtures_;
  std::map<std::string, std::vector<GeneratedUtterance>> generation_fixtures_;
  std::map<std::string, std::vector<double>> embedding_fixtures_;
  std::vector<double> position_bias_;
  std::atomic<int> mcq_calls_{0};
  std::atomic<int> generate_calls_{0};
  std::atomic<int> embed_calls_{0};
};

}  // namespace rsa2

#endif  // RSA2_PROVIDER_HPP_
