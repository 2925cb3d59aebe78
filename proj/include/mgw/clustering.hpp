#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mgw/metric.hpp"
#include "mgw/point_cloud.hpp"
#include "mgw/rng.hpp"

namespace mgw {

enum class ClustererKind { EpsilonGraph, KMeans };

struct ClustererSpec {
  ClustererKind kind = ClustererKind::EpsilonGraph;
  double epsilon = 0.1;       // EpsilonGraph
  int k = 3;                  // KMeans
  int max_iter = 100;         // KMeans
  std::uint64_t seed = 42;    // KMeans

  static ClustererSpec epsilon_graph(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("clusterer epsilon must be positive");
    ClustererSpec s;
    s.kind = ClustererKind::EpsilonGraph;
    s.epsilon = eps;
    return s;
  }
  static ClustererSpec kmeans(int k, int max_iter = 100, std::uint64_t seed = 42) {
    if (k < 1) throw std::invalid_argument("kmeans k must be >= 1");
    ClustererSpec s;
    s.kind = ClustererKind::KMeans;
    s.k = k;
    s.max_iter = max_iter;
    s.seed = seed;
    return s;
  }
};

namespace detail {

/// Lloyd iterations with k-means++ seeding; k is capped at |subset|.
/// Deterministic for a fixed seed. Empty clusters are dropped from the output.
inline std::vector<std::vector<int>> kmeans_cluster(const PointCloud& cloud, const std::vector<int>& subset,
                                                    const ClustererSpec& spec, Rng rng) {
  const int m = static_cast<int>(subset.size());
  const int k = std::min(spec.k, m);
  const auto& P = cloud.points();

  // k-means++ seeding
  std::vector<int> centers_idx;
  centers_idx.push_back(subset[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(m)))]);
  std::vector<double> d2(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers_idx.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      const double d = (P.row(subset[static_cast<std::size_t>(i)]) - P.row(centers_idx.back())).squaredNorm();
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], d);
      total += d2[static_cast<std::size_t>(i)];
    }
    int chosen = -1;
    if (total > 0.0) {
      const double target = rng.next_double() * total;
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) chosen = m - 1;
    } else {
      chosen = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    }
    centers_idx.push_back(subset[static_cast<std::size_t>(chosen)]);
  }

  Eigen::MatrixXd centers(k, cloud.dim());
  for (int c = 0; c < k; ++c) centers.row(c) = P.row(centers_idx[static_cast<std::size_t>(c)]);

  std::vector<int> assign(static_cast<std::size_t>(m), 0);
  Eigen::MatrixXd new_centers(k, cloud.dim());
  Eigen::VectorXd counts(k);
  for (int it = 0; it < spec.max_iter; ++it) {
    for (int i = 0; i < m; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (P.row(subset[static_cast<std::size_t>(i)]) - centers.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      assign[static_cast<std::size_t>(i)] = best_c;
    }
    new_centers.setZero();
    counts.setZero();
    for (int i = 0; i < m; ++i) {
      new_centers.row(assign[static_cast<std::size_t>(i)]) += P.row(subset[static_cast<std::size_t>(i)]);
      counts(assign[static_cast<std::size_t>(i)]) += 1.0;
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts(c) > 0.0) {
        new_centers.row(c) /= counts(c);
        shift = std::max(shift, (new_centers.row(c) - centers.row(c)).norm());
        centers.row(c) = new_centers.row(c);
      }
    }
    if (shift < 1e-8) break;
  }

  std::vector<std::vector<int>> clusters(static_cast<std::size_t>(k));
  for (int i = 0; i < m; ++i) clusters[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])].push_back(subset[static_cast<std::size_t>(i)]);
  std::vector<std::vector<int>> out;
  for (auto& c : clusters) {
    if (c.empty()) continue;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace detail

/// Partition `subset` into clusters. For the epsilon-graph kind the caller
/// supplies the neighborhood graph built on the full cloud at spec.epsilon.
/// `stream` disambiguates the KMeans RNG across cover intervals.
inline std::vector<std::vector<int>> run_clusterer(const ClustererSpec& spec, const PointCloud& cloud,
                                                   const std::vector<int>& subset,
                                                   const NeighborhoodGraph* graph, std::uint64_t stream = 0) {
  if (subset.empty()) return {};
  switch (spec.kind) {
    case ClustererKind::EpsilonGraph:
      if (!graph) throw std::invalid_argument("epsilon-graph clusterer needs a neighborhood graph");
      return graph->connected_components(subset);
    case ClustererKind::KMeans:
      return detail::kmeans_cluster(cloud, subset, spec, Rng(spec.seed).split(stream));
  }
  throw std::logic_error("unreachable clusterer kind");
}

}  // namespace mgw
