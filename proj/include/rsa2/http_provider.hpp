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

#ifndef RSA2_HTTP_PROVIDER_HPP_
#define RSA2_HTTP_PROVIDER_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "rsa2/provider.hpp"

namespace rsa2 {

// Client-side configuration for an OpenAI-compatible completions endpoint
// with logprobs. Prompt wording lives here as template values, not in the
// engine: {condition} and {options} are substituted into mcq_template.
struct HttpProviderConfig {
  std::string base_url;  // e.g. "http://127.0.0.1:8080"
  std::string api_key;
  std::string model;
  std::string embedding_model;  // defaults to model when empty

  int connect_timeout_ms = 5000;
  int read_timeout_ms = 120000;
  int max_retries = 3;
  int retry_initial_delay_ms = 200;  // doubled per attempt
  int top_logprobs = 20;
  int max_generation_tokens = 48;

  std::string mcq_template =
      "Task: You will read a short scenario followed by a multiple-choice "
      "question.\nRead the scenario and answer with the number of the best "
      "option.\n\n{condition}\n\n{options}\n\nAnswer:";

  // Reads RSA2_PROVIDER_URL, RSA2_PROVIDER_KEY and RSA2_PROVIDER_MODEL.
  static HttpProviderConfig from_env();
};

class HttpProvider : public ProbabilityProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  ~HttpProvider() override;

  ProviderCapabilities capabilities() const override;
  std::vector<double> mcq_option_probabilities(
      const McqQuery& query, const std::vector<std::string>& presented) override;
  std::vector<GeneratedUtterance> generate(const GenerationQuery& query) override;
  double score_generation(const std::string& context_prefix,
                          const std::string& text) override;
  std::vector<double> embed(const std::string& utterance) override;

  // Exposed for tests: the prompt sent for an MCQ round.
  std::string build_mcq_prompt(const McqQuery& query,
                               const std::vector<std::string>& presented) const;

 private:
  nlohmann::json post_json(const std::string& path, const nlohmann::json& body);

  HttpProviderConfig config_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class CacheMode { kRecord, kReplay };

// Wraps any provider with an append-only JSONL request/response cache keyed
// by the canonical request JSON. Record mode reads through to the inner
// provider on a miss and logs the result; replay mode never touches the
// network and fails loudly on a miss, making recorded runs reproducible
// offline and bit-identical.
class ReplayProvider : public ProbabilityProvider {
 public:
  ReplayProvider(std::shared_ptr<ProbabilityProvider> inner,
                 std::string cache_path, CacheMode mode);

  ProviderCapabilities capabilities() const override;
  std::vector<double> mcq_option_probabilities(
      const McqQuery& query, const std::vector<std::string>& presented) override;
  std::vector<GeneratedUtterance> generate(const GenerationQuery& query) override;
  double score_generation(const std::string& context_prefix,
                          const std::string& text) override;
  std::vector<double> embed(const std::string& utterance) override;

  std::size_t cache_size() const;

 private:
  nlohmann::json lookup_or_call(
      const nlohmann::json& request,
      const std::function<nlohmann::json()>& call);

  std::shared_ptr<ProbabilityProvider> inner_;
  std::string cache_path_;
  CacheMode mode_;
  mutable std::mutex mutex_;
  std::map<std::string, nlohmann::json> cache_;
};

}  // namespace rsa2

#endif  // RSA2_HTTP_PROVIDER_HPP_
