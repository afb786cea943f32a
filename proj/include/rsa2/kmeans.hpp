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

#ifndef RSA2_KMEANS_HPP_
#define RSA2_KMEANS_HPP_

#include <cstdint>
#include <vector>

namespace rsa2 {

struct ClusterModel {
  std::size_t k = 0;
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignment;  // point index -> cluster id
  double inertia = 0.0;

  std::vector<std::size_t> cluster_sizes() const;
};

// Lloyd's iteration with k-means++ seeding, restarted n_init times; returns
// the completed run with the lowest inertia. Fully deterministic given the
// seed. An init that produces an empty cluster is retried with a derived
// seed up to five times, then dropped; if every init degenerates the call
// throws EmptyClusterError. Throws TooFewPointsError when k is 0 or exceeds
// the number of points.
ClusterModel kmeans(const std::vector<std::vector<double>>& points,
                    std::size_t k, std::size_t n_init = 10,
                    std::uint64_t seed = 0);

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b);

}  // namespace rsa2

#endif  // RSA2_KMEANS_HPP_
