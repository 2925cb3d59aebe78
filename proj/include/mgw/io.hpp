#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgw/point_cloud.hpp"

namespace mgw {

/// Round-trip decimal formatting (17 significant digits).
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + s + "' " + context);
  }
}

}  // namespace detail

struct LoadedCloud {
  PointCloud cloud;
  std::optional<FilterValues> filter;  // from an optional trailing `f` column
};

/// CSV cloud: header `x0,x1,...,x{D-1}[,f]`, one point per row.
inline LoadedCloud load_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: " + path);
  auto header = detail::split_csv_line(line);
  bool has_filter = !header.empty() && header.back() == "f";
  const std::size_t dim = header.size() - (has_filter ? 1 : 0);
  for (std::size_t c = 0; c < dim; ++c) {
    if (header[c] != "x" + std::to_string(c))
      throw ParseError("bad CSV header at column " + std::to_string(c) + " in " + path +
                       " (expected x" + std::to_string(c) + ", got '" + header[c] + "')");
  }
  if (dim == 0) throw ParseError("CSV header declares no coordinate columns: " + path);

  std::vector<double> coords;
  std::vector<double> fvals;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()) + " in " + path);
    for (std::size_t c = 0; c < dim; ++c)
      coords.push_back(detail::parse_double(fields[c], "at line " + std::to_string(lineno) + " of " + path));
    if (has_filter)
      fvals.push_back(detail::parse_double(fields.back(), "at line " + std::to_string(lineno) + " of " + path));
    ++rows;
  }
  if (rows == 0) throw ParseError("CSV has a header but no points: " + path);
  Eigen::MatrixXd pts(rows, dim);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < dim; ++c) pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = coords[i * dim + c];
  LoadedCloud out{PointCloud(std::move(pts)), std::nullopt};
  if (has_filter) out.filter = FilterValues::from(std::move(fvals));
  return out;
}

/// OFF mesh: vertices become the cloud, faces are parsed but ignored here.
inline PointCloud load_cloud_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::string tok;
  if (!(in >> tok) || tok != "OFF") throw ParseError("missing OFF header in " + path);
  long nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne)) throw ParseError("bad OFF counts line in " + path);
  if (nv < 1) throw ParseError("OFF file declares no vertices: " + path);
  Eigen::MatrixXd pts(nv, 3);
  for (long i = 0; i < nv; ++i) {
    double x, y, z;
    if (!(in >> x >> y >> z)) throw ParseError("bad vertex " + std::to_string(i) + " in " + path);
    pts(i, 0) = x;
    pts(i, 1) = y;
    pts(i, 2) = z;
  }
  return PointCloud(std::move(pts));
}

inline LoadedCloud load_cloud(const std::string& path, const std::string& format) {
  if (format == "csv") return load_cloud_csv(path);
  if (format == "off") return {load_cloud_off(path), std::nullopt};
  throw std::invalid_argument("unknown cloud format: " + format);
}

inline void save_cloud_csv(const std::string& path, const PointCloud& cloud,
                           const FilterValues* filter = nullptr) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (Eigen::Index c = 0; c < cloud.dim(); ++c) out << (c ? "," : "") << "x" << c;
  if (filter) out << ",f";
  out << "\n";
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    for (Eigen::Index c = 0; c < cloud.dim(); ++c) out << (c ? "," : "") << format_double(cloud.points()(i, c));
    if (filter) out << "," << format_double(filter->values[static_cast<std::size_t>(i)]);
    out << "\n";
  }
}

/// Headerless numeric matrix CSV.
inline void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

inline Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = detail::split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(detail::parse_double(f, "at line " + std::to_string(lineno) + " of " + path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("ragged matrix at line " + std::to_string(lineno) + " of " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file: " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace mgw
