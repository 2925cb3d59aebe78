#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/io.hpp"
#include "mgw/mapper.hpp"
#include "mgw/metric.hpp"

namespace mgw {

/// Finite metric measure space: labels, symmetric distance matrix, and a
/// strictly positive probability weight vector.
struct MetricMeasureSpace {
  std::vector<std::string> labels;
  Eigen::MatrixXd D;
  Eigen::VectorXd w;

  Eigen::Index size() const { return w.size(); }

  void validate(double tol = 1e-9) const {
    const Eigen::Index m = w.size();
    if (D.rows() != m || D.cols() != m) throw std::invalid_argument("mm-space matrix/weights size mismatch");
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != m)
      throw std::invalid_argument("mm-space labels size mismatch");
    if (std::abs(w.sum() - 1.0) > tol) throw std::invalid_argument("mm-space weights must sum to 1");
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(w(i) > 0.0)) throw std::invalid_argument("mm-space weights must be positive");
      if (std::abs(D(i, i)) > tol) throw std::invalid_argument("mm-space matrix diagonal must be zero");
      for (Eigen::Index j = 0; j < m; ++j) {
        if (D(i, j) < 0.0) throw std::invalid_argument("mm-space distances must be nonnegative");
        if (std::abs(D(i, j) - D(j, i)) > tol) throw std::invalid_argument("mm-space matrix must be symmetric");
      }
    }
  }
};

/// Hausdorff distance between two finite id sets under the bound metric.
/// Conventions: d_H(A, empty) = Diam(cloud), d_H(empty, empty) = 0.
inline double hausdorff(const std::vector<int>& a, const std::vector<int>& b, const BoundMetric& metric) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return metric.diameter();
  double sup = 0.0;
  for (int x : a) {
    double inf = std::numeric_limits<double>::infinity();
    for (int y : b) inf = std::min(inf, metric(x, y));
    sup = std::max(sup, inf);
  }
  for (int y : b) {
    double inf = std::numeric_limits<double>::infinity();
    for (int x : a) inf = std::min(inf, metric(x, y));
    sup = std::max(sup, inf);
  }
  return sup;
}

/// Assemble (M_n, d_H, m_n o Delta^-1): one row per simplex with positive
/// mass, pairwise Hausdorff distances between representatives.
inline MetricMeasureSpace mapper_to_mm(const MapperGraph& mapper, const BoundMetric& metric) {
  std::vector<int> kept;
  for (std::size_t s = 0; s < mapper.simplices.size(); ++s)
    if (mapper.simplices[s].mass > 0.0) kept.push_back(static_cast<int>(s));
  if (kept.empty()) throw std::invalid_argument("all simplex representatives are empty");

  const auto m = static_cast<Eigen::Index>(kept.size());
  MetricMeasureSpace mm;
  mm.D = Eigen::MatrixXd::Zero(m, m);
  mm.w = Eigen::VectorXd(m);
  mm.labels.reserve(kept.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = mapper.simplices[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])];
    mm.w(i) = s.mass;
    mm.labels.push_back(s.is_edge ? "e" + std::to_string(s.v0) + "-" + std::to_string(s.v1)
                                  : "v" + std::to_string(s.v0));
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& ri = mapper.simplices[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])].representative;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const auto& rj = mapper.simplices[static_cast<std::size_t>(kept[static_cast<std::size_t>(j)])].representative;
      const double d = hausdorff(ri, rj, metric);
      mm.D(i, j) = d;
      mm.D(j, i) = d;
    }
  }
  return mm;
}

inline nlohmann::json mm_to_json(const MetricMeasureSpace& mm) {
  nlohmann::json j;
  j["labels"] = mm.labels;
  j["weights"] = std::vector<double>(mm.w.data(), mm.w.data() + mm.w.size());
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < mm.D.rows(); ++i)
    rows.push_back(std::vector<double>(mm.D.row(i).begin(), mm.D.row(i).end()));
  j["matrix"] = std::move(rows);
  return j;
}

inline MetricMeasureSpace mm_from_json(const nlohmann::json& j) {
  MetricMeasureSpace mm;
  if (j.contains("labels")) mm.labels = j.at("labels").get<std::vector<std::string>>();
  auto w = j.at("weights").get<std::vector<double>>();
  mm.w = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  const auto& rows = j.at("matrix");
  const auto m = static_cast<Eigen::Index>(rows.size());
  mm.D.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    auto row = rows.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != m) throw ParseError("mm-space matrix is not square");
    for (Eigen::Index k = 0; k < m; ++k) mm.D(i, k) = row[static_cast<std::size_t>(k)];
  }
  mm.validate();
  return mm;
}

inline void save_mm_space(const std::string& json_path, const MetricMeasureSpace& mm,
                          const std::string& matrix_csv_path = "") {
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("cannot write file: " + json_path);
  out << mm_to_json(mm).dump(2) << "\n";
  if (!matrix_csv_path.empty()) save_matrix_csv(matrix_csv_path, mm.D);
}

inline MetricMeasureSpace load_mm_space(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ParseError("cannot open file: " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid mm-space JSON in ") + json_path + ": " + e.what());
  }
  return mm_from_json(j);
}

}  // namespace mgw
