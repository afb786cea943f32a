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

#ifndef RSA2_CATEGORICAL_HPP_
#define RSA2_CATEGORICAL_HPP_

#include <string>
#include <utility>
#include <vector>

#include "rsa2/label_space.hpp"

namespace rsa2 {

// Normalization tolerance enforced on every constructed distribution.
inline constexpr double kSumTolerance = 1e-12;

// An exactly normalized finite distribution over a label space. This is the
// universal currency of the library: every listener, speaker, prior and
// posterior is one of these. Immutable after construction.
class Categorical {
 public:
  // Validates: length matches the space, entries >= 0, sum within
  // kSumTolerance of 1. Use from_weights for unnormalized input.
  Categorical(LabelSpacePtr space, std::vector<double> probs);

  // Normalizes non-negative weights. Throws AllZeroMassError when every
  // weight is zero and LengthMismatchError on a length mismatch.
  static Categorical from_weights(LabelSpacePtr space,
                                  const std::vector<double>& weights);

  static Categorical uniform(LabelSpacePtr space);
  // Point mass on one label.
  static Categorical delta(LabelSpacePtr space, const std::string& label);

  const LabelSpacePtr& space() const { return space_; }
  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }

  double prob(std::size_t index) const;
  double prob(const std::string& label) const;

  // Label with maximal probability; ties broken by lowest index.
  const std::string& argmax_label() const;
  std::size_t argmax_index() const;

 private:
  LabelSpacePtr space_;
  std::vector<double> probs_;
};

// Convex combination of distributions over one shared space. Weights must
// sum to 1 within 1e-9. Throws SpaceMismatchError / WeightsNotNormalizedError.
Categorical mix(const std::vector<std::pair<double, Categorical>>& components);

}  // namespace rsa2

#endif  // RSA2_CATEGORICAL_HPP_
