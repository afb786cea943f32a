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

#ifndef RSA2_RUN_CONFIG_HPP_
#define RSA2_RUN_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace rsa2 {

// Reader for the flat TOML subset used by run configs: `key = value` pairs,
// [section] headers flattened to "section.key", strings, integers, floats,
// booleans and # comments.
class TomlTable {
 public:
  static TomlTable parse(const std::string& text, const std::string& origin);
  static TomlTable parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // key -> raw value text
  std::string origin_;
};

// Resolved parameters of one CLI run. Defaults mirror the reference
// experimental settings (alpha 1, uniform strategy prior, 4 clusters, 50
// alternatives, 500 epochs).
struct RunConfig {
  std::string model;                       // rsa | rsa2 | qud-affect | rsc
  std::string dataset;                     // builtin name or file path
  double alpha = 1.0;
  std::string strategy_prior = "uniform";  // uniform | file | provider | indicator
  std::string strategy_prior_file;
  std::string provider = "mock";           // mock | http | replay
  std::string replay_cache;
  std::string mock_fixtures;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  std::string meaning_prior_file;
  std::string utterance_prior_file;
  std::string weather_priors_file;
  std::string fr_checkpoint;

  std::size_t rsc_k = 4;
  int rsc_alts = 50;
  int max_in_flight = 1;

  int epochs = 500;
  double train_fraction = 0.6;
  double val_fraction = 0.2;

  // Reads every known key from the table; unknown keys are a ConfigError.
  void apply_toml(const TomlTable& table);
  // Enum values, file existence and numeric ranges; ConfigError on failure.
  void validate() const;
  // Canonical echo written next to every run's outputs.
  std::string to_toml() const;
};

}  // namespace rsa2

#endif  // RSA2_RUN_CONFIG_HPP_
