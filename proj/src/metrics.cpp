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

#include "rsa2/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "rsa2/errors.hpp"

namespace rsa2 {

double mad(const DistributionsByCell& predicted,
           const DistributionsByCell& human) {
  if (predicted.size() != human.size()) {
    throw KeyMismatchError("predicted and human tables have " +
                           std::to_string(predicted.size()) + " vs " +
                           std::to_string(human.size()) + " cells");
  }
  double total = 0.0;
  std::size_t cells = 0;
  for (const auto& [key, pred] : predicted) {
    auto it = human.find(key);
    if (it == human.end()) {
      throw KeyMismatchError("human table is missing cell (" + key.first +
                             ", " + key.second + ")");
    }
    const Categorical& ref = it->second;
    if (!same_space(pred.space(), ref.space())) {
      throw KeyMismatchError("meaning spaces differ at cell (" + key.first +
                             ", " + key.second + ")");
    }
    for (std::size_t m = 0; m < pred.size(); ++m) {
      total += std::abs(pred.prob(m) - ref.prob(m));
      ++cells;
    }
  }
  if (cells == 0) {
    throw KeyMismatchError("mad over zero cells is undefined");
  }
  return total / static_cast<double>(cells);
}

namespace {

void accumulate(MeaningScoreRow& row, const Scenario& scenario,
                const Categorical& dist) {
  row.correct += dist.prob(scenario.meaning_with_role(scenario.intended_role).text);
  row.incorrect +=
      dist.prob(scenario.meaning_with_role(scenario.incorrect_role()).text);
  const double overlap =
      dist.prob(scenario.meaning_with_role(MeaningRole::kOverlap).text);
  const double nonsequitur =
      dist.prob(scenario.meaning_with_role(MeaningRole::kNonSequitur).text);
  row.overlap += overlap;
  row.nonsequitur += nonsequitur;
  row.distractor += overlap + nonsequitur;
  row.count += 1;
}

void finalize(MeaningScoreRow& row) {
  if (row.count == 0) return;
  const auto n = static_cast<double>(row.count);
  row.correct /= n;
  row.incorrect /= n;
  row.distractor /= n;
  row.overlap /= n;
  row.nonsequitur /= n;
}

}  // namespace

MeaningScores meaning_scores(const std::vector<Scenario>& scenarios,
                             const std::vector<Categorical>& listener_rows) {
  if (scenarios.size() != listener_rows.size()) {
    throw KeyMismatchError("got " + std::to_string(listener_rows.size()) +
                           " listener rows for " +
                           std::to_string(scenarios.size()) + " scenarios");
  }
  MeaningScores scores;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!same_space(listener_rows[i].space(), scenarios[i].meaning_space())) {
      throw KeyMismatchError("listener row " + std::to_string(i) +
                             " is not over scenario " + scenarios[i].id +
                             "'s meaning space");
    }
    accumulate(scores.overall, scenarios[i], listener_rows[i]);
    if (scenarios[i].split == ScenarioSplit::kValidation) {
      accumulate(scores.validation, scenarios[i], listener_rows[i]);
    } else {
      accumulate(scores.test, scenarios[i], listener_rows[i]);
    }
  }
  finalize(scores.overall);
  finalize(scores.validation);
  finalize(scores.test);
  return scores;
}

PriorSet ablate(const PriorSet& priors, AblationTarget target) {
  if (target == AblationTarget::kMeaningPrior) {
    return PriorSet(ConditionalTable::uniform(priors.meaning_prior().given(),
                                              priors.meaning_prior().over()),
                    priors.utterance_prior(), priors.strategy_posterior());
  }
  return PriorSet(priors.meaning_prior(),
                  ConditionalTable::uniform(priors.utterance_prior().given(),
                                            priors.utterance_prior().over()),
                  priors.strategy_posterior());
}

RsPosteriorReport rs_posterior_report(
    const std::vector<Scenario>& scenarios,
    const std::vector<Categorical>& posteriors) {
  if (scenarios.size() != posteriors.size()) {
    throw KeyMismatchError("got " + std::to_string(posteriors.size()) +
                           " posteriors for " +
                           std::to_string(scenarios.size()) + " scenarios");
  }
  if (posteriors.empty()) {
    throw KeyMismatchError("report over zero scenarios is undefined");
  }
  const auto& space = posteriors.front().space();
  RsPosteriorReport report;
  report.strategies = space->labels();
  report.overall.assign(space->size(), 0.0);
  report.validation.assign(space->size(), 0.0);
  report.test.assign(space->size(), 0.0);
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    if (!same_space(posteriors[i].space(), space)) {
      throw KeyMismatchError("posterior " + std::to_string(i) +
                             " is over a different strategy space");
    }
    const bool validation = scenarios[i].split == ScenarioSplit::kValidation;
    for (std::size_t r = 0; r < space->size(); ++r) {
      report.overall[r] += posteriors[i].prob(r);
      (validation ? report.validation[r] : report.test[r]) +=
          posteriors[i].prob(r);
    }
    (validation ? report.validation_count : report.test_count) += 1;
  }
  for (std::size_t r = 0; r < space->size(); ++r) {
    report.overall[r] /= static_cast<double>(posteriors.size());
    if (report.validation_count > 0) {
      report.validation[r] /= static_cast<double>(report.validation_count);
    }
    if (report.test_count > 0) {
      report.test[r] /= static_cast<double>(report.test_count);
    }
  }
  return report;
}

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_distribution_csv(const std::string& path,
                            const std::vector<DistributionRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write CSV file " + path);
  }
  auto quote = [](const std::string& field) {
    std::string quoted = "\"";
    for (char c : field) {
      if (c == '"') quoted += "\"\"";
      else quoted += c;
    }
    quoted += "\"";
    return quoted;
  };
  out << "model,listener,context,utterance,meaning,probability\n";
  for (const auto& row : rows) {
    for (std::size_t m = 0; m < row.distribution.size(); ++m) {
      out << quote(row.model) << ',' << quote(row.listener) << ','
          << quote(row.context) << ',' << quote(row.utterance) << ','
          << quote(row.distribution.space()->label(m)) << ','
          << format_double(row.distribution.prob(m)) << "\n";
    }
  }
}

}  // namespace rsa2
