#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/clustering.hpp"
#include "mgw/cover.hpp"
#include "mgw/metric.hpp"
#include "mgw/point_cloud.hpp"

namespace mgw {

/// Nerve 1-skeleton of the pullback cover, with the disjoint simplex
/// representatives and the empirical pushforward masses attached.
class MapperGraph {
 public:
  struct Vertex {
    int interval = 0;  // cover interval index j (0-based)
    int cluster = 0;   // cluster index k within the interval
    std::vector<int> members;
  };
  struct Simplex {
    bool is_edge = false;
    int v0 = 0;
    int v1 = -1;  // second vertex for edges
    std::vector<int> representative;
    double mass = 0.0;
  };

  int n_points = 0;
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;  // vertex index pairs, v0 < v1 by construction order
  std::vector<Simplex> simplices;          // all vertices first, then all edges
  std::vector<int> delta;                  // point id -> simplex index

  int simplex_of(int point_id) const {
    if (point_id < 0 || point_id >= n_points) throw std::out_of_range("point id out of range");
    return delta[static_cast<std::size_t>(point_id)];
  }

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

/// Pullback clustering + nerve. Each point ends up in the representative of
/// exactly one simplex; simplices with empty representative keep mass 0.
inline MapperGraph build_mapper(const PointCloud& cloud, const AmbientMetric& metric,
                                const FilterValues& filter, const CoverScheme& cover,
                                const ClustererSpec& clusterer) {
  const auto n = static_cast<int>(cloud.size());
  if (static_cast<int>(filter.size()) != n) throw std::invalid_argument("filter/cloud size mismatch");

  // Neighborhood graph for epsilon-graph clustering. A geodesic ambient
  // metric shares the same graph when the scales coincide; otherwise the
  // clusterer scale wins (the metric only enters the mm-space assembly).
  std::optional<NeighborhoodGraph> graph;
  if (clusterer.kind == ClustererKind::EpsilonGraph) graph.emplace(cloud, clusterer.epsilon);

  MapperGraph out;
  out.n_points = n;

  // point id -> vertices whose cluster contains it (at most two: g < 1/2)
  std::vector<std::vector<int>> memberships(static_cast<std::size_t>(n));
  for (int j = 0; j < cover.r; ++j) {
    const Interval& iv = cover.intervals[static_cast<std::size_t>(j)];
    std::vector<int> preimage;
    for (int i = 0; i < n; ++i)
      if (iv.contains(filter.values[static_cast<std::size_t>(i)])) preimage.push_back(i);
    if (preimage.empty()) continue;
    auto clusters = run_clusterer(clusterer, cloud, preimage, graph ? &*graph : nullptr,
                                  static_cast<std::uint64_t>(j));
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      const int v = static_cast<int>(out.vertices.size());
      for (int pid : clusters[k]) {
        auto& m = memberships[static_cast<std::size_t>(pid)];
        m.push_back(v);
        if (m.size() > 2) throw std::logic_error("point lies in more than two clusters (gain >= 1/2?)");
      }
      out.vertices.push_back({j, static_cast<int>(k), std::move(clusters[k])});
    }
  }
  if (out.vertices.empty()) throw std::invalid_argument("mapper has no vertices (empty cover preimages)");

  // Nerve edges from shared points; dedupe via ordered map for determinism.
  std::map<std::pair<int, int>, std::vector<int>> edge_points;
  for (int i = 0; i < n; ++i) {
    const auto& m = memberships[static_cast<std::size_t>(i)];
    if (m.size() == 2) {
      auto key = std::minmax(m[0], m[1]);
      edge_points[{key.first, key.second}].push_back(i);
    }
  }

  out.simplices.resize(out.vertices.size());
  for (std::size_t v = 0; v < out.vertices.size(); ++v) {
    out.simplices[v].is_edge = false;
    out.simplices[v].v0 = static_cast<int>(v);
  }
  for (auto& [key, pts] : edge_points) {
    MapperGraph::Simplex s;
    s.is_edge = true;
    s.v0 = key.first;
    s.v1 = key.second;
    s.representative = std::move(pts);
    out.edges.emplace_back(key.first, key.second);
    out.simplices.push_back(std::move(s));
  }

  // Vertex representatives: members belonging to no other cluster.
  out.delta.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const auto& m = memberships[static_cast<std::size_t>(i)];
    if (m.empty()) throw std::logic_error("point not covered by any interval");
    if (m.size() == 1) {
      out.simplices[static_cast<std::size_t>(m[0])].representative.push_back(i);
      out.delta[static_cast<std::size_t>(i)] = m[0];
    }
  }
  for (std::size_t s = out.vertices.size(); s < out.simplices.size(); ++s)
    for (int pid : out.simplices[s].representative) out.delta[static_cast<std::size_t>(pid)] = static_cast<int>(s);

  for (auto& s : out.simplices) {
    std::sort(s.representative.begin(), s.representative.end());
    s.mass = static_cast<double>(s.representative.size()) / n;
  }
  return out;
}

inline int delta_map(const MapperGraph& mapper, int point_id) { return mapper.simplex_of(point_id); }

inline nlohmann::json mapper_to_json(const MapperGraph& m) {
  nlohmann::json j;
  j["n_points"] = m.n_points;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : m.vertices)
    j["vertices"].push_back({{"interval", v.interval}, {"cluster", v.cluster}, {"members", v.members}});
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : m.edges) j["edges"].push_back({a, b});
  j["simplices"] = nlohmann::json::array();
  for (const auto& s : m.simplices) {
    nlohmann::json js;
    js["type"] = s.is_edge ? "edge" : "vertex";
    js["v0"] = s.v0;
    if (s.is_edge) js["v1"] = s.v1;
    js["representative"] = s.representative;
    js["mass"] = s.mass;
    j["simplices"].push_back(std::move(js));
  }
  return j;
}

/// GraphViz-compatible edge list (one `u -- v` line per edge).
inline std::string mapper_to_edge_list(const MapperGraph& m) {
  std::string out = "graph mapper {\n";
  for (std::size_t v = 0; v < m.vertices.size(); ++v) out += "  " + std::to_string(v) + ";\n";
  for (const auto& [a, b] : m.edges) out += "  " + std::to_string(a) + " -- " + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace mgw
