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

#ifndef RSA2_METRICS_HPP_
#define RSA2_METRICS_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rsa2/categorical.hpp"
#include "rsa2/rsa.hpp"
#include "rsa2/scenario.hpp"

namespace rsa2 {

// Meaning distributions keyed by (context, utterance).
using DistributionsByCell =
    std::map<std::pair<std::string, std::string>, Categorical>;

// Mean absolute difference over all (context, utterance, meaning) cells.
// Symmetric, bounded by 1 for distributions. Throws KeyMismatchError when the
// key sets or meaning spaces differ.
double mad(const DistributionsByCell& predicted,
           const DistributionsByCell& human);

struct MeaningScoreRow {
  double correct = 0.0;
  double incorrect = 0.0;
  double distractor = 0.0;  // overlap + nonsequitur
  double overlap = 0.0;
  double nonsequitur = 0.0;
  std::size_t count = 0;
};

struct MeaningScores {
  MeaningScoreRow overall;
  MeaningScoreRow validation;
  MeaningScoreRow test;
};

// Average listener mass on the intended meaning (correct), the opposite role
// (incorrect) and the two distractors, overall and per split. listener_rows
// are aligned with scenarios and each is over that scenario's meaning space.
MeaningScores meaning_scores(const std::vector<Scenario>& scenarios,
                             const std::vector<Categorical>& listener_rows);

enum class AblationTarget { kMeaningPrior, kUtterancePrior };

// Replaces the named prior with the uniform table over the same spaces.
PriorSet ablate(const PriorSet& priors, AblationTarget target);

// Mean strategy posterior per split; posteriors are aligned with scenarios
// and share one strategy space.
struct RsPosteriorReport {
  std::vector<std::string> strategies;
  std::vector<double> overall;
  std::vector<double> validation;
  std::vector<double> test;
  std::size_t validation_count = 0;
  std::size_t test_count = 0;
};

RsPosteriorReport rs_posterior_report(const std::vector<Scenario>& scenarios,
                                      const std::vector<Categorical>& posteriors);

// One emitted distribution: CSV rows are (model, listener, context,
// utterance, meaning, probability).
struct DistributionRow {
  std::string model;
  std::string listener;
  std::string context;
  std::string utterance;
  Categorical distribution;
};

void write_distribution_csv(const std::string& path,
                            const std::vector<DistributionRow>& rows);

// Shortest round-trip decimal form, stable across platforms.
std::string format_double(double value);

}  // namespace rsa2

#endif  // RSA2_METRICS_HPP_
