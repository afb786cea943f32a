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

#include "rsa2/http_provider.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>
#include <utility>

#include <httplib.h>

#include "rsa2/errors.hpp"
#include "rsa2/rng.hpp"

namespace rsa2 {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value != nullptr ? std::string(value) : fallback;
}

void replace_all(std::string& text, const std::string& placeholder,
                 const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

HttpProviderConfig HttpProviderConfig::from_env() {
  HttpProviderConfig config;
  config.base_url = env_or("RSA2_PROVIDER_URL", "");
  config.api_key = env_or("RSA2_PROVIDER_KEY", "");
  config.model = env_or("RSA2_PROVIDER_MODEL", "");
  if (config.base_url.empty() || config.model.empty()) {
    throw ConfigError(
        "http provider needs RSA2_PROVIDER_URL and RSA2_PROVIDER_MODEL");
  }
  return config;
}

struct HttpProvider::Impl {
  explicit Impl(const HttpProviderConfig& config) : client(config.base_url) {
    client.set_connection_timeout(
        std::chrono::milliseconds(config.connect_timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(config.read_timeout_ms));
    if (!config.api_key.empty()) {
      client.set_default_headers(
          {{"Authorization", "Bearer " + config.api_key}});
    }
  }
  httplib::Client client;
};

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_)) {
  if (config_.embedding_model.empty()) {
    config_.embedding_model = config_.model;
  }
}

HttpProvider::~HttpProvider() = default;

ProviderCapabilities HttpProvider::capabilities() const {
  return ProviderCapabilities{true, true, true};
}

nlohmann::json HttpProvider::post_json(const std::string& path,
                                       const nlohmann::json& body) {
  const std::string payload = body.dump();
  int delay_ms = config_.retry_initial_delay_ms;
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms *= 2;
    }
    auto res = impl_->client.Post(path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("endpoint rejected credentials (HTTP " +
                      std::to_string(res->status) + ")");
    }
    if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("unexpected HTTP " + std::to_string(res->status) +
                          " from " + path + ": " + res->body);
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError("endpoint returned unparsable JSON: " +
                          std::string(e.what()));
    }
  }
  throw TimeoutError("request to " + path + " failed after " +
                     std::to_string(config_.max_retries + 1) +
                     " attempts; last error: " + last_error);
}

std::string HttpProvider::build_mcq_prompt(
    const McqQuery& query, const std::vector<std::string>& presented) const {
  std::string condition = query.context_text;
  if (query.utterance) condition += "\n" + *query.utterance;
  if (query.strategy_framing) condition += "\n" + *query.strategy_framing;

  std::string options;
  for (std::size_t i = 0; i < presented.size(); ++i) {
    options += std::to_string(i + 1) + ". " + presented[i];
    if (i + 1 < presented.size()) options += "\n";
  }

  std::string prompt = config_.mcq_template;
  replace_all(prompt, "{condition}", condition);
  replace_all(prompt, "{options}", options);
  return prompt;
}

std::vector<double> HttpProvider::mcq_option_probabilities(
    const McqQuery& query, const std::vector<std::string>& presented) {
  const nlohmann::json body = {
      {"model", config_.model},
      {"prompt", build_mcq_prompt(query, presented)},
      {"max_tokens", 1},
      {"temperature", 0.0},
      {"logprobs", config_.top_logprobs},
  };
  const auto response = post_json("/v1/completions", body);

  nlohmann::json top;
  try {
    top = response.at("choices").at(0).at("logprobs").at("top_logprobs").at(0);
  } catch (const nlohmann::json::exception&) {
    throw MissingLogprobError(
        "endpoint response carries no usable top_logprobs");
  }
  if (!top.is_object()) {
    throw MissingLogprobError("top_logprobs entry is not a token map");
  }

  // Option numbers are 1-based; look for the bare digit token first and fall
  // back to the space-prefixed variant some tokenizers emit.
  std::vector<double> logits(presented.size());
  bool any = false;
  for (std::size_t i = 0; i < presented.size(); ++i) {
    const std::string digit = std::to_string(i + 1);
    if (top.contains(digit)) {
      logits[i] = top.at(digit).get<double>();
      any = true;
    } else if (top.contains(" " + digit)) {
      logits[i] = top.at(" " + digit).get<double>();
      any = true;
    } else {
      logits[i] = -1e9;  // effectively zero probability after the softmax
    }
  }
  if (!any) {
    throw MissingLogprobError(
        "no option-number token appears in the returned logprobs");
  }

  double max_logit = logits[0];
  for (double l : logits) max_logit = std::max(max_logit, l);
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<GeneratedUtterance> HttpProvider::generate(
    const GenerationQuery& query) {
  const nlohmann::json body = {
      {"model", config_.model},
      {"prompt", query.context_prefix},
      {"max_tokens", config_.max_generation_tokens},
      {"temperature", query.temperature},
      {"n", query.n},
      {"logprobs", 1},
      {"stop", {"\""}},
      {"seed", query.seed},
  };
  const auto response = post_json("/v1/completions", body);
  if (!response.contains("choices") || !response.at("choices").is_array()) {
    throw ProtocolError("completion response has no choices array");
  }

  std::vector<GeneratedUtterance> out;
  for (const auto& choice : response.at("choices")) {
    const std::string text = choice.value("text", "");
    double loglik = 0.0;
    try {
      for (const auto& lp : choice.at("logprobs").at("token_logprobs")) {
        if (!lp.is_null()) loglik += lp.get<double>();
      }
    } catch (const nlohmann::json::exception&) {
      throw MissingLogprobError(
          "generation choices carry no token_logprobs; the generation prior "
          "needs sequence log-likelihoods");
    }
    out.push_back(GeneratedUtterance{text, loglik});
  }
  return out;
}

double HttpProvider::score_generation(const std::string& context_prefix,
                                      const std::string& text) {
  // Echo scoring: ask for zero new tokens and read the logprobs of the
  // continuation's own tokens, located via text_offset.
  const nlohmann::json body = {
      {"model", config_.model},  {"prompt", context_prefix + text},
      {"max_tokens", 0},         {"temperature", 0.0},
      {"logprobs", 1},           {"echo", true},
  };
  const auto response = post_json("/v1/completions", body);
  try {
    const auto& logprobs = response.at("choices").at(0).at("logprobs");
    const auto& token_logprobs = logprobs.at("token_logprobs");
    const auto& offsets = logprobs.at("text_offset");
    double total = 0.0;
    for (std::size_t i = 0; i < token_logprobs.size(); ++i) {
      if (offsets.at(i).get<std::size_t>() < context_prefix.size()) continue;
      if (token_logprobs.at(i).is_null()) continue;
      total += token_logprobs.at(i).get<double>();
    }
    return total;
  } catch (const nlohmann::json::exception&) {
    throw MissingLogprobError("echo scoring needs token_logprobs/text_offset");
  }
}

std::vector<double> HttpProvider::embed(const std::string& utterance) {
  const nlohmann::json body = {
      {"model", config_.embedding_model},
      {"input", nlohmann::json::array({utterance})},
  };
  const auto response = post_json("/v1/embeddings", body);
  try {
    return response.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("embedding response has no data[0].embedding");
  }
}

// --- ReplayProvider -----------------------------------------------------------

ReplayProvider::ReplayProvider(std::shared_ptr<ProbabilityProvider> inner,
                               std::string cache_path, CacheMode mode)
    : inner_(std::move(inner)), cache_path_(std::move(cache_path)), mode_(mode) {
  if (mode_ == CacheMode::kRecord && !inner_) {
    throw ConfigError("record mode needs an inner provider");
  }
  std::ifstream in(cache_path_);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      auto entry = nlohmann::json::parse(line);
      cache_[entry.at("request").dump()] = entry.at("response");
    } catch (const nlohmann::json::exception& e) {
      throw DataError("replay cache " + cache_path_ + " line " +
                      std::to_string(line_number) + ": " + e.what());
    }
  }
}

ProviderCapabilities ReplayProvider::capabilities() const {
  return inner_ ? inner_->capabilities()
                : ProviderCapabilities{true, true, true};
}

std::size_t ReplayProvider::cache_size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

nlohmann::json ReplayProvider::lookup_or_call(
    const nlohmann::json& request,
    const std::function<nlohmann::json()>& call) {
  const std::string key = request.dump();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  if (mode_ == CacheMode::kReplay) {
    throw ProviderError("replay cache miss for request " + key);
  }
  const nlohmann::json response = call();
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = cache_.emplace(key, response);
  if (inserted) {
    std::ofstream out(cache_path_, std::ios::app);
    if (!out) {
      throw DataError("cannot append to replay cache " + cache_path_);
    }
    out << nlohmann::json{{"key", fnv1a(key)},
                          {"request", request},
                          {"response", response}}
               .dump()
        << "\n";
  }
  return it->second;
}

std::vector<double> ReplayProvider::mcq_option_probabilities(
    const McqQuery& query, const std::vector<std::string>& presented) {
  const nlohmann::json request = {
      {"op", "mcq"},
      {"context", query.context_text},
      {"utterance", query.utterance ? nlohmann::json(*query.utterance)
                                    : nlohmann::json()},
      {"framing", query.strategy_framing
                      ? nlohmann::json(*query.strategy_framing)
                      : nlohmann::json()},
      {"presented", presented},
  };
  const auto response = lookup_or_call(request, [&] {
    return nlohmann::json(inner_->mcq_option_probabilities(query, presented));
  });
  return response.get<std::vector<double>>();
}

std::vector<GeneratedUtterance> ReplayProvider::generate(
    const GenerationQuery& query) {
  const nlohmann::json request = {
      {"op", "generate"},
      {"prefix", query.context_prefix},
      {"n", query.n},
      {"temperature", query.temperature},
      {"seed", query.seed},
  };
  const auto response = lookup_or_call(request, [&] {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& u : inner_->generate(query)) {
      list.push_back({{"text", u.text}, {"loglik", u.loglik}});
    }
    return list;
  });
  std::vector<GeneratedUtterance> out;
  for (const auto& entry : response) {
    out.push_back(GeneratedUtterance{entry.at("text").get<std::string>(),
                                     entry.at("loglik").get<double>()});
  }
  return out;
}

double ReplayProvider::score_generation(const std::string& context_prefix,
                                        const std::string& text) {
  const nlohmann::json request = {
      {"op", "score"}, {"prefix", context_prefix}, {"text", text}};
  const auto response = lookup_or_call(request, [&] {
    return nlohmann::json(inner_->score_generation(context_prefix, text));
  });
  return response.get<double>();
}

std::vector<double> ReplayProvider::embed(const std::string& utterance) {
  const nlohmann::json request = {{"op", "embed"}, {"utterance", utterance}};
  const auto response = lookup_or_call(request, [&] {
    return nlohmann::json(inner_->embed(utterance));
  });
  return response.get<std::vector<double>>();
}

}  // namespace rsa2
