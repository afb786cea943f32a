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

#ifndef RSA2_RSC_HPP_
#define RSA2_RSC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsa2/categorical.hpp"
#include "rsa2/kmeans.hpp"
#include "rsa2/provider.hpp"
#include "rsa2/scenario.hpp"

namespace rsa2 {

// Relative cluster sizes as a distribution over the induced strategy
// clusters: P(r|c,u) = |U_r| / |U|. total must match the number of assigned
// utterances.
Categorical cluster_size_posterior(const ClusterModel& model,
                                   std::size_t total);

// The induced rhetorical-function values of one cluster: the cluster's
// pooled meaning distribution divided pointwise by P(m|c,u) of the observed
// utterance. Raw ratios may exceed 1; they are rescaled by their maximum
// before entering the listener stack. Throws DivisionByZeroPriorError when
// the observed row has a zero entry.
std::vector<double> rsc_fr_values(
    const std::vector<std::size_t>& member_indices,
    const std::vector<Categorical>& meaning_given_alternative,
    const Categorical& meaning_given_observed);

struct RscClusterReport {
  std::vector<std::string> members;
  std::size_t size = 0;
  std::vector<double> fr_raw;
  std::vector<double> fr_scaled;  // fr_raw / max(fr_raw), in [0,1]
  Categorical l0;
  Categorical l1;
};

struct RscReport {
  std::string scenario_id;
  std::vector<std::string> alternatives;  // lexicographically sorted
  std::vector<double> utterance_prior;    // aligned with alternatives
  Categorical cluster_posterior;
  std::vector<RscClusterReport> clusters;
  Categorical l0_marginal;
  Categorical l1_marginal;

  nlohmann::json to_json() const;
};

struct RscOptions {
  std::size_t k = 4;
  int n_alternatives = 50;
  double alpha = 1.0;
  bool use_meaning_prior = true;  // false ablates P(m|c) to uniform
  std::uint64_t seed = 0;
  int max_in_flight = 1;  // provider-call concurrency cap
};

// End-to-end strategy induction for one scenario: generate alternatives,
// embed and cluster them, derive per-cluster rhetorical functions and
// marginalize the conditioned listeners by relative cluster size. k is
// clamped to the number of distinct utterances. Deterministic for a fixed
// seed and provider.
RscReport rsc_pipeline(ProbabilityProvider& provider, const Scenario& scenario,
                       const RscOptions& options);

}  // namespace rsa2

#endif  // RSA2_RSC_HPP_
