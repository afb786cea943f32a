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

#include "rsa2/conditional_table.hpp"

#include <utility>

#include <nlohmann/json.hpp>

#include "rsa2/errors.hpp"

namespace rsa2 {

std::string join_key(const std::vector<std::string>& labels) {
  std::string key;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) key += '|';
    key += labels[i];
  }
  return key;
}

std::vector<std::vector<std::string>> product_tuples(
    const std::vector<LabelSpacePtr>& given) {
  std::vector<std::vector<std::string>> tuples = {{}};
  for (const auto& space : given) {
    std::vector<std::vector<std::string>> next;
    next.reserve(tuples.size() * space->size());
    for (const auto& prefix : tuples) {
      for (const auto& label : space->labels()) {
        auto tuple = prefix;
        tuple.push_back(label);
        next.push_back(std::move(tuple));
      }
    }
    tuples = std::move(next);
  }
  return tuples;
}

ConditionalTable::ConditionalTable(std::vector<LabelSpacePtr> given,
                                   LabelSpacePtr over,
                                   std::map<std::string, Categorical> rows)
    : given_(std::move(given)), over_(std::move(over)), rows_(std::move(rows)) {
  if (given_.empty()) {
    throw DataError("conditional table needs at least one conditioning axis");
  }
  const auto tuples = product_tuples(given_);
  if (rows_.size() != tuples.size()) {
    throw DataError("conditional table has " + std::to_string(rows_.size()) +
                    " rows, expected " + std::to_string(tuples.size()));
  }
  for (const auto& tuple : tuples) {
    auto it = rows_.find(join_key(tuple));
    if (it == rows_.end()) {
      throw DataError("conditional table is missing row \"" + join_key(tuple) +
                      "\"");
    }
    if (!same_space(it->second.space(), over_)) {
      throw SpaceMismatchError("row \"" + join_key(tuple) +
                               "\" is not over the declared " +
                               to_string(over_->kind()) + " space");
    }
  }
}

ConditionalTable ConditionalTable::constant(std::vector<LabelSpacePtr> given,
                                            Categorical row) {
  std::map<std::string, Categorical> rows;
  for (const auto& tuple : product_tuples(given)) {
    rows.emplace(join_key(tuple), row);
  }
  LabelSpacePtr over = row.space();
  return ConditionalTable(std::move(given), std::move(over), std::move(rows));
}

ConditionalTable ConditionalTable::uniform(std::vector<LabelSpacePtr> given,
                                           LabelSpacePtr over) {
  return constant(std::move(given), Categorical::uniform(std::move(over)));
}

const Categorical& ConditionalTable::row(
    const std::vector<std::string>& condition) const {
  if (condition.size() != given_.size()) {
    throw KeyMismatchError("condition tuple of length " +
                           std::to_string(condition.size()) +
                           " does not match " + std::to_string(given_.size()) +
                           " conditioning axes");
  }
  auto it = rows_.find(join_key(condition));
  if (it == rows_.end()) {
    throw KeyMismatchError("no row for condition \"" + join_key(condition) +
                           "\"");
  }
  return it->second;
}

const Categorical& ConditionalTable::row(const std::string& a) const {
  return row(std::vector<std::string>{a});
}

const Categorical& ConditionalTable::row(const std::string& a,
                                         const std::string& b) const {
  return row(std::vector<std::string>{a, b});
}

ConditionalTable ConditionalTable::from_json(
    const nlohmann::json& j, const std::vector<LabelSpacePtr>& given,
    const LabelSpacePtr& over) {
  if (!j.is_object() || !j.contains("given") || !j.contains("over") ||
      !j.contains("rows")) {
    throw DataError(
        "conditional table JSON must have \"given\", \"over\" and \"rows\"");
  }
  const auto& given_kinds = j.at("given");
  if (!given_kinds.is_array() || given_kinds.size() != given.size()) {
    throw DataError("conditional table declares " +
                    std::to_string(given_kinds.size()) +
                    " conditioning axes, expected " +
                    std::to_string(given.size()));
  }
  for (std::size_t i = 0; i < given.size(); ++i) {
    const auto declared = given_kinds.at(i).get<std::string>();
    if (space_kind_from_string(declared) != given[i]->kind()) {
      throw DataError("conditioning axis " + std::to_string(i) + " is \"" +
                      declared + "\", expected \"" +
                      to_string(given[i]->kind()) + "\"");
    }
  }
  if (space_kind_from_string(j.at("over").get<std::string>()) != over->kind()) {
    throw DataError("table is over \"" + j.at("over").get<std::string>() +
                    "\", expected \"" + to_string(over->kind()) + "\"");
  }

  std::map<std::string, Categorical> rows;
  for (const auto& [key, row_json] : j.at("rows").items()) {
    std::vector<double> weights(over->size(), 0.0);
    for (const auto& [label, value] : row_json.items()) {
      if (!over->contains(label)) {
        throw DataError("row \"" + key + "\" mentions unknown " +
                        to_string(over->kind()) + " label \"" + label + "\"");
      }
      weights[over->index_of(label)] = value.get<double>();
    }
    rows.emplace(key, Categorical::from_weights(over, weights));
  }
  return ConditionalTable(given, over, std::move(rows));
}

nlohmann::json ConditionalTable::to_json() const {
  nlohmann::json j;
  j["given"] = nlohmann::json::array();
  for (const auto& space : given_) j["given"].push_back(to_string(space->kind()));
  j["over"] = to_string(over_->kind());
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& [key, dist] : rows_) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < dist.size(); ++i) {
      row[over_->label(i)] = dist.prob(i);
    }
    rows[key] = std::move(row);
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace rsa2
