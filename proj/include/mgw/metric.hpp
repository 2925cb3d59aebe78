#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mgw/point_cloud.hpp"

namespace mgw {

inline constexpr Eigen::Index kDenseMatrixCap = 20000;

enum class MetricKind { Euclidean, GraphGeodesic };

/// Ambient metric specification: plain Euclidean, or shortest paths in the
/// epsilon-neighborhood graph weighted by Euclidean edge lengths.
struct AmbientMetric {
  MetricKind kind = MetricKind::Euclidean;
  double epsilon = 0.0;  // only for GraphGeodesic

  static AmbientMetric euclidean() { return {MetricKind::Euclidean, 0.0}; }
  static AmbientMetric graph_geodesic(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("geodesic epsilon must be positive");
    return {MetricKind::GraphGeodesic, eps};
  }
};

/// Undirected epsilon-graph over point ids; edge (i,j) iff d(i,j) <= epsilon.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph(const PointCloud& cloud, double epsilon) : n_(cloud.size()), epsilon_(epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("neighborhood epsilon must be positive");
    adjacency_.resize(static_cast<std::size_t>(n_));
    if (cloud.dim() <= 4 && n_ > 64) {
      build_bucketed(cloud);
    } else {
      build_brute(cloud);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
  }

  Eigen::Index size() const { return n_; }
  double epsilon() const { return epsilon_; }
  const std::vector<int>& neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
      for (int j : neighbors(i))
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  /// Connected components of the subgraph induced by `subset`.
  /// Components are returned sorted by smallest member id; members sorted.
  std::vector<std::vector<int>> connected_components(const std::vector<int>& subset) const {
    std::vector<char> in_subset(static_cast<std::size_t>(n_), 0);
    for (int v : subset) {
      if (v < 0 || v >= n_) throw std::out_of_range("point id out of range");
      in_subset[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<std::vector<int>> components;
    std::vector<int> order = subset;
    std::sort(order.begin(), order.end());
    std::vector<int> stack;
    for (int start : order) {
      if (seen[static_cast<std::size_t>(start)]) continue;
      std::vector<int> comp;
      stack.assign(1, start);
      seen[static_cast<std::size_t>(start)] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (int w : neighbors(v)) {
          if (in_subset[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
    return components;
  }

 private:
  void add_edge(int i, int j) {
    adjacency_[static_cast<std::size_t>(i)].push_back(j);
    adjacency_[static_cast<std::size_t>(j)].push_back(i);
  }

  void build_brute(const PointCloud& cloud) {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (cloud.distance(i, j) <= epsilon_) add_edge(i, j);
  }

  void build_bucketed(const PointCloud& cloud) {
    const int d = static_cast<int>(cloud.dim());
    const double cell = epsilon_;
    auto key_of = [&](Eigen::Index i) {
      std::uint64_t h = 1469598103934665603ULL;
      for (int c = 0; c < d; ++c) {
        auto q = static_cast<std::int64_t>(std::floor(cloud.points()(i, c) / cell));
        h ^= static_cast<std::uint64_t>(q) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return h;
    };
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;
    std::vector<std::uint64_t> keys(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      keys[static_cast<std::size_t>(i)] = key_of(i);
      buckets[keys[static_cast<std::size_t>(i)]].push_back(i);
    }
    // enumerate neighbor cells by offsetting quantized coordinates
    std::vector<std::int64_t> q(static_cast<std::size_t>(d));
    std::vector<int> offs(static_cast<std::size_t>(d), -1);
    for (int i = 0; i < n_; ++i) {
      for (int c = 0; c < d; ++c)
        q[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(std::floor(cloud.points()(i, c) / cell));
      std::fill(offs.begin(), offs.end(), -1);
      while (true) {
        std::uint64_t h = 1469598103934665603ULL;
        for (int c = 0; c < d; ++c) {
          std::uint64_t v = static_cast<std::uint64_t>(q[static_cast<std::size_t>(c)] + offs[static_cast<std::size_t>(c)]);
          h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        auto it = buckets.find(h);
        if (it != buckets.end()) {
          for (int j : it->second)
            if (j > i && cloud.distance(i, j) <= epsilon_) add_edge(i, j);
        }
        int c = 0;
        for (; c < d; ++c) {
          if (offs[static_cast<std::size_t>(c)] < 1) {
            ++offs[static_cast<std::size_t>(c)];
            break;
          }
          offs[static_cast<std::size_t>(c)] = -1;
        }
        if (c == d) break;
      }
    }
  }

  Eigen::Index n_;
  double epsilon_;
  std::vector<std::vector<int>> adjacency_;
};

namespace detail {

/// Single-source shortest paths with nonnegative weights; ties broken by
/// smallest vertex id via the priority-queue ordering.
inline void dijkstra(const NeighborhoodGraph& graph, const PointCloud& cloud, int source,
                     std::vector<double>& dist) {
  const auto n = static_cast<std::size_t>(graph.size());
  dist.assign(n, std::numeric_limits<double>::infinity());
  dist[static_cast<std::size_t>(source)] = 0.0;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv > dist[static_cast<std::size_t>(v)]) continue;
    for (int w : graph.neighbors(v)) {
      const double cand = dv + cloud.distance(v, w);
      if (cand < dist[static_cast<std::size_t>(w)]) {
        dist[static_cast<std::size_t>(w)] = cand;
        pq.emplace(cand, w);
      }
    }
  }
}

}  // namespace detail

/// Dense pairwise distance matrix. Capped at kDenseMatrixCap points.
inline Eigen::MatrixXd pairwise_distances(const PointCloud& cloud, const AmbientMetric& metric) {
  const Eigen::Index n = cloud.size();
  if (n > kDenseMatrixCap) throw std::invalid_argument("dense distance matrix capped at 20000 points");
  Eigen::MatrixXd D(n, n);
  if (metric.kind == MetricKind::Euclidean) {
    for (Eigen::Index i = 0; i < n; ++i) {
      D(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double d = cloud.distance(i, j);
        D(i, j) = d;
        D(j, i) = d;
      }
    }
    return D;
  }
  NeighborhoodGraph graph(cloud, metric.epsilon);
  std::vector<double> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    detail::dijkstra(graph, cloud, static_cast<int>(i), row);
    for (Eigen::Index j = 0; j < n; ++j) D(i, j) = row[static_cast<std::size_t>(j)];
  }
  // Disconnected pairs: keep the matrix finite, farther than any connected pair.
  double max_finite = 0.0;
  bool has_inf = false;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isfinite(D(i, j)))
        max_finite = std::max(max_finite, D(i, j));
      else
        has_inf = true;
    }
  if (has_inf) {
    const double fill = 2.0 * max_finite;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (!std::isfinite(D(i, j))) D(i, j) = fill;
  }
  return D;
}

/// Metric bound to a concrete cloud: answers d(i,j) without materializing a
/// dense matrix in the Euclidean case.
class BoundMetric {
 public:
  BoundMetric(const PointCloud& cloud, const AmbientMetric& metric) : cloud_(&cloud) {
    if (metric.kind == MetricKind::GraphGeodesic)
      matrix_ = std::make_shared<Eigen::MatrixXd>(pairwise_distances(cloud, metric));
  }

  Eigen::Index size() const { return cloud_->size(); }

  double operator()(Eigen::Index i, Eigen::Index j) const {
    return matrix_ ? (*matrix_)(i, j) : cloud_->distance(i, j);
  }

  const PointCloud& cloud() const { return *cloud_; }

  /// Max pairwise distance (0 for a single point). Cached after first call.
  double diameter() const {
    if (diameter_ < 0.0) {
      double m = 0.0;
      const Eigen::Index n = cloud_->size();
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) m = std::max(m, (*this)(i, j));
      diameter_ = m;
    }
    return diameter_;
  }

 private:
  const PointCloud* cloud_;
  std::shared_ptr<Eigen::MatrixXd> matrix_;
  mutable double diameter_ = -1.0;
};

inline double diameter(const PointCloud& cloud, const AmbientMetric& metric) {
  return BoundMetric(cloud, metric).diameter();
}

}  // namespace mgw
