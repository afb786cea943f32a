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

#include "rsa2/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rsa2/errors.hpp"
#include "rsa2/metrics.hpp"

namespace rsa2 {

namespace {

std::string strip(const std::string& text) {
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

// Removes a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(const std::string& value, const std::string& where) {
  if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
    throw ConfigError(where + ": expected a quoted string, got " + value);
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < value.size(); ++i) {
    if (value[i] == '\\' && i + 2 < value.size()) {
      ++i;
      switch (value[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default:
          throw ConfigError(where + ": unsupported escape \\" +
                            std::string(1, value[i]));
      }
    } else {
      out += value[i];
    }
  }
  return out;
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text, const std::string& origin) {
  TomlTable table;
  table.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string where = origin + ":" + std::to_string(line_number);
    line = strip(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(where + ": malformed section header");
      }
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected `key = value`");
    }
    std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(where + ": empty key or value");
    }
    if (!section.empty()) key = section + "." + key;
    if (!table.values_.emplace(key, value).second) {
      throw ConfigError(where + ": duplicate key \"" + key + "\"");
    }
  }
  return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

bool TomlTable::has(const std::string& key) const {
  return values_.find(key) != values_.end();
}

std::optional<std::string> TomlTable::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return unquote(it->second, origin_ + " key \"" + key + "\"");
}

std::optional<double> TomlTable::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double value = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + " key \"" + key + "\": expected a number, got " +
                      it->second);
  }
}

std::optional<std::int64_t> TomlTable::get_int(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::int64_t value = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + " key \"" + key +
                      "\": expected an integer, got " + it->second);
  }
}

std::optional<bool> TomlTable::get_bool(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw ConfigError(origin_ + " key \"" + key + "\": expected true or false");
}

void RunConfig::apply_toml(const TomlTable& table) {
  static const std::set<std::string> known = {
      "model",          "dataset",
      "alpha",          "strategy_prior",
      "strategy_prior_file", "provider",
      "replay_cache",   "mock_fixtures",
      "seed",           "output_dir",
      "meaning_prior_file", "utterance_prior_file",
      "weather_priors_file", "fr_checkpoint",
      "rsc.k",          "rsc.alts",
      "max_in_flight",  "train.epochs",
      "train.train_fraction", "train.val_fraction"};
  for (const auto& [key, value] : table.raw()) {
    if (known.find(key) == known.end()) {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }
  if (auto v = table.get_string("model")) model = *v;
  if (auto v = table.get_string("dataset")) dataset = *v;
  if (auto v = table.get_double("alpha")) alpha = *v;
  if (auto v = table.get_string("strategy_prior")) strategy_prior = *v;
  if (auto v = table.get_string("strategy_prior_file")) strategy_prior_file = *v;
  if (auto v = table.get_string("provider")) provider = *v;
  if (auto v = table.get_string("replay_cache")) replay_cache = *v;
  if (auto v = table.get_string("mock_fixtures")) mock_fixtures = *v;
  if (auto v = table.get_int("seed")) seed = static_cast<std::uint64_t>(*v);
  if (auto v = table.get_string("output_dir")) output_dir = *v;
  if (auto v = table.get_string("meaning_prior_file")) meaning_prior_file = *v;
  if (auto v = table.get_string("utterance_prior_file")) {
    utterance_prior_file = *v;
  }
  if (auto v = table.get_string("weather_priors_file")) {
    weather_priors_file = *v;
  }
  if (auto v = table.get_string("fr_checkpoint")) fr_checkpoint = *v;
  if (auto v = table.get_int("rsc.k")) rsc_k = static_cast<std::size_t>(*v);
  if (auto v = table.get_int("rsc.alts")) rsc_alts = static_cast<int>(*v);
  if (auto v = table.get_int("max_in_flight")) {
    max_in_flight = static_cast<int>(*v);
  }
  if (auto v = table.get_int("train.epochs")) epochs = static_cast<int>(*v);
  if (auto v = table.get_double("train.train_fraction")) train_fraction = *v;
  if (auto v = table.get_double("train.val_fraction")) val_fraction = *v;
}

void RunConfig::validate() const {
  static const std::set<std::string> models = {"rsa", "rsa2", "qud-affect",
                                               "rsc"};
  static const std::set<std::string> priors = {"uniform", "file", "provider",
                                               "indicator"};
  static const std::set<std::string> providers = {"mock", "http", "replay"};
  if (models.find(model) == models.end()) {
    throw ConfigError("model must be one of rsa, rsa2, qud-affect, rsc; got \"" +
                      model + "\"");
  }
  if (priors.find(strategy_prior) == priors.end()) {
    throw ConfigError("strategy_prior must be uniform, file, provider or "
                      "indicator; got \"" + strategy_prior + "\"");
  }
  if (providers.find(provider) == providers.end()) {
    throw ConfigError("provider must be mock, http or replay; got \"" +
                      provider + "\"");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be finite and non-negative");
  }
  if (strategy_prior == "file" && strategy_prior_file.empty()) {
    throw ConfigError("strategy_prior = file needs strategy_prior_file");
  }
  for (const std::string& path :
       {strategy_prior_file, mock_fixtures, meaning_prior_file,
        utterance_prior_file, weather_priors_file, fr_checkpoint}) {
    if (!path.empty() && !std::filesystem::exists(path)) {
      throw ConfigError("referenced file does not exist: " + path);
    }
  }
  if (rsc_k == 0 || rsc_alts < 1 || max_in_flight < 1) {
    throw ConfigError("rsc.k, rsc.alts and max_in_flight must be positive");
  }
}

std::string RunConfig::to_toml() const {
  auto quoted = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "alpha = " << format_double(alpha) << "\n";
  out << "dataset = " << quoted(dataset) << "\n";
  out << "fr_checkpoint = " << quoted(fr_checkpoint) << "\n";
  out << "max_in_flight = " << max_in_flight << "\n";
  out << "meaning_prior_file = " << quoted(meaning_prior_file) << "\n";
  out << "mock_fixtures = " << quoted(mock_fixtures) << "\n";
  out << "model = " << quoted(model) << "\n";
  out << "output_dir = " << quoted(output_dir) << "\n";
  out << "provider = " << quoted(provider) << "\n";
  out << "replay_cache = " << quoted(replay_cache) << "\n";
  out << "seed = " << seed << "\n";
  out << "strategy_prior = " << quoted(strategy_prior) << "\n";
  out << "strategy_prior_file = " << quoted(strategy_prior_file) << "\n";
  out << "utterance_prior_file = " << quoted(utterance_prior_file) << "\n";
  out << "weather_priors_file = " << quoted(weather_priors_file) << "\n";
  out << "[rsc]\n";
  out << "alts = " << rsc_alts << "\n";
  out << "k = " << rsc_k << "\n";
  out << "[train]\n";
  out << "epochs = " << epochs << "\n";
  out << "train_fraction = " << format_double(train_fraction) << "\n";
  out << "val_fraction = " << format_double(val_fraction) << "\n";
  return out.str();
}

}  // namespace rsa2
