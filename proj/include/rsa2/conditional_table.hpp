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

#ifndef RSA2_CONDITIONAL_TABLE_HPP_
#define RSA2_CONDITIONAL_TABLE_HPP_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/categorical.hpp"
#include "rsa2/label_space.hpp"

namespace rsa2 {

// Conditioning tuples are serialized as labels joined with '|'.
std::string join_key(const std::vector<std::string>& labels);

// A fully populated conditional distribution P(over | given...): one
// Categorical row for every tuple in the product of the conditioning spaces.
class ConditionalTable {
 public:
  ConditionalTable(std::vector<LabelSpacePtr> given, LabelSpacePtr over,
                   std::map<std::string, Categorical> rows);

  // Same row for every conditioning tuple.
  static ConditionalTable constant(std::vector<LabelSpacePtr> given,
                                   Categorical row);
  static ConditionalTable uniform(std::vector<LabelSpacePtr> given,
                                  LabelSpacePtr over);

  const std::vector<LabelSpacePtr>& given() const { return given_; }
  const LabelSpacePtr& over() const { return over_; }
  const std::map<std::string, Categorical>& rows() const { return rows_; }

  const Categorical& row(const std::vector<std::string>& condition) const;
  const Categorical& row(const std::string& a) const;
  const Categorical& row(const std::string& a, const std::string& b) const;

  // JSON schema:
  //   {"given": ["context"], "over": "meaning",
  //    "rows": {"<ctx>": {"<meaning>": p, ...}, ...}}
  // Rows are renormalized through from_weights on load, so files rounded to
  // a few decimals are accepted.
  static ConditionalTable from_json(const nlohmann::json& j,
                                    const std::vector<LabelSpacePtr>& given,
                                    const LabelSpacePtr& over);
  nlohmann::json to_json() const;

 private:
  std::vector<LabelSpacePtr> given_;
  LabelSpacePtr over_;
  std::map<std::string, Categorical> rows_;
};

// Every conditioning tuple of the product space, in row-major label order.
std::vector<std::vector<std::string>> product_tuples(
    const std::vector<LabelSpacePtr>& given);

}  // namespace rsa2

#endif  // RSA2_CONDITIONAL_TABLE_HPP_
