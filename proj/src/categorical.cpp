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

#include "rsa2/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rsa2/errors.hpp"

namespace rsa2 {

namespace {

// Sorting before accumulation makes the sum invariant under permutation of
// the inputs, which keeps mix() and friends bit-deterministic.
double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace

Categorical::Categorical(LabelSpacePtr space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (!space_) {
    throw SpaceMismatchError("Categorical requires a label space");
  }
  if (probs_.size() != space_->size()) {
    throw LengthMismatchError(
        "probability vector of length " + std::to_string(probs_.size()) +
        " does not match " + to_string(space_->kind()) + " space of size " +
        std::to_string(space_->size()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ModelError("Categorical entries must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw WeightsNotNormalizedError(
        "Categorical entries sum to " + std::to_string(total) +
        ", expected 1 within 1e-12");
  }
}

Categorical Categorical::from_weights(LabelSpacePtr space,
                                      const std::vector<double>& weights) {
  if (!space) {
    throw SpaceMismatchError("from_weights requires a label space");
  }
  if (weights.size() != space->size()) {
    throw LengthMismatchError(
        "weight vector of length " + std::to_string(weights.size()) +
        " does not match " + to_string(space->kind()) + " space of size " +
        std::to_string(space->size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ModelError("weights must be finite and non-negative");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw AllZeroMassError("all weights are zero over the " +
                           to_string(space->kind()) + " space");
  }
  std::vector<double> probs(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) probs[i] = weights[i] / total;
  return Categorical(std::move(space), std::move(probs));
}

Categorical Categorical::uniform(LabelSpacePtr space) {
  if (!space) {
    throw SpaceMismatchError("uniform requires a label space");
  }
  std::vector<double> probs(space->size(), 1.0 / static_cast<double>(space->size()));
  return Categorical(std::move(space), std::move(probs));
}

Categorical Categorical::delta(LabelSpacePtr space, const std::string& label) {
  if (!space) {
    throw SpaceMismatchError("delta requires a label space");
  }
  std::vector<double> probs(space->size(), 0.0);
  probs[space->index_of(label)] = 1.0;
  return Categorical(std::move(space), std::move(probs));
}

double Categorical::prob(std::size_t index) const {
  if (index >= probs_.size()) {
    throw LabelOutOfSpaceError("index " + std::to_string(index) +
                               " out of range for distribution of size " +
                               std::to_string(probs_.size()));
  }
  return probs_[index];
}

double Categorical::prob(const std::string& label) const {
  return probs_[space_->index_of(label)];
}

std::size_t Categorical::argmax_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    if (probs_[i] > probs_[best]) best = i;
  }
  return best;
}

const std::string& Categorical::argmax_label() const {
  return space_->label(argmax_index());
}

Categorical mix(const std::vector<std::pair<double, Categorical>>& components) {
  if (components.empty()) {
    throw ModelError("mix requires at least one component");
  }
  const LabelSpacePtr& space = components.front().second.space();
  double weight_total = 0.0;
  for (const auto& [weight, dist] : components) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw WeightsNotNormalizedError("mixture weights must be non-negative");
    }
    if (!same_space(space, dist.space())) {
      throw SpaceMismatchError("mix components must share one label space");
    }
    weight_total += weight;
  }
  if (std::abs(weight_total - 1.0) > 1e-9) {
    throw WeightsNotNormalizedError(
        "mixture weights sum to " + std::to_string(weight_total) +
        ", expected 1 within 1e-9");
  }
  if (components.size() == 1) {
    return components.front().second;
  }

  const std::size_t n = space->size();
  std::vector<double> combined(n, 0.0);
  std::vector<double> terms(components.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < components.size(); ++k) {
      terms[k] = components[k].first * components[k].second.prob(i);
    }
    combined[i] = sorted_sum(terms);
  }
  // Weights may be off 1 by up to 1e-9, so renormalize to the exact
  // Categorical contract.
  return Categorical::from_weights(space, combined);
}

}  // namespace rsa2
