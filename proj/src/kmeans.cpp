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

#include "rsa2/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rsa2/errors.hpp"
#include "rsa2/rng.hpp"

namespace rsa2 {

namespace {

constexpr std::size_t kMaxIterations = 300;
constexpr std::size_t kEmptyClusterRetries = 5;

std::size_t nearest_centroid(const std::vector<double>& point,
                             const std::vector<std::vector<double>>& centroids) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double dist = squared_distance(point, centroids[c]);
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

std::vector<std::vector<double>> plus_plus_seeding(
    const std::vector<std::vector<double>>& points, std::size_t k,
    std::mt19937_64& rng) {
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::vector<bool> chosen(points.size(), false);

  const std::size_t first = uniform_below(rng, points.size());
  centroids.push_back(points[first]);
  chosen[first] = true;

  std::vector<double> dist(points.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      dist[i] = chosen[i] ? 0.0
                          : squared_distance(points[i], centroids.back());
      if (centroids.size() > 1) {
        double best = dist[i];
        for (const auto& c : centroids) {
          best = std::min(best, squared_distance(points[i], c));
        }
        dist[i] = chosen[i] ? 0.0 : best;
      }
      total += dist[i];
    }
    std::size_t next = points.size();
    if (total > 0.0) {
      const double target = uniform_unit(rng) * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        cum += dist[i];
        if (cum >= target && !chosen[i]) {
          next = i;
          break;
        }
      }
    }
    if (next == points.size()) {
      // All remaining points coincide with chosen centroids; take the first
      // unchosen index so seeding still terminates deterministically.
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!chosen[i]) {
          next = i;
          break;
        }
      }
    }
    centroids.push_back(points[next]);
    chosen[next] = true;
  }
  return centroids;
}

// One full Lloyd run; nullopt when an empty cluster appears.
std::optional<ClusterModel> lloyd_run(
    const std::vector<std::vector<double>>& points, std::size_t k,
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t dim = points.front().size();
  ClusterModel model;
  model.k = k;
  model.centroids = plus_plus_seeding(points, k, rng);
  model.assignment.assign(points.size(), 0);

  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = nearest_centroid(points[i], model.centroids);
      if (c != model.assignment[i]) {
        model.assignment[i] = c;
        changed = true;
      }
    }
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      counts[model.assignment[i]] += 1;
      for (std::size_t d = 0; d < dim; ++d) {
        sums[model.assignment[i]][d] += points[i][d];
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) return std::nullopt;
      for (std::size_t d = 0; d < dim; ++d) {
        model.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
    if (!changed) break;
  }

  model.inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    model.inertia +=
        squared_distance(points[i], model.centroids[model.assignment[i]]);
  }
  return model;
}

}  // namespace

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t c : assignment) sizes[c] += 1;
  return sizes;
}

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ShapeMismatchError("points have mismatched dimensions");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    total += diff * diff;
  }
  return total;
}

ClusterModel kmeans(const std::vector<std::vector<double>>& points,
                    std::size_t k, std::size_t n_init, std::uint64_t seed) {
  if (k == 0 || k > points.size()) {
    throw TooFewPointsError("k = " + std::to_string(k) + " with " +
                            std::to_string(points.size()) + " points");
  }
  for (const auto& p : points) {
    if (p.size() != points.front().size()) {
      throw ShapeMismatchError("all points must share one dimension");
    }
    for (double x : p) {
      if (!std::isfinite(x)) {
        throw ModelError("points must have finite coordinates");
      }
    }
  }

  std::optional<ClusterModel> best;
  for (std::size_t init = 0; init < n_init; ++init) {
    std::optional<ClusterModel> model;
    for (std::size_t attempt = 0; attempt <= kEmptyClusterRetries; ++attempt) {
      const std::uint64_t run_seed =
          seed + 0x9e3779b97f4a7c15ull * (init * (kEmptyClusterRetries + 1) +
                                          attempt + 1);
      model = lloyd_run(points, k, run_seed);
      if (model) break;
    }
    if (model && (!best || model->inertia < best->inertia)) {
      best = std::move(model);
    }
  }
  if (!best) {
    throw EmptyClusterError(
        "every initialization produced an empty cluster; k = " +
        std::to_string(k) + " is likely too large for the data");
  }
  return *best;
}

}  // namespace rsa2
