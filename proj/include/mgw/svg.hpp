#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgw/io.hpp"

namespace mgw {

/// Minimal deterministic SVG plots (scatter and polyline) for reports.
class SvgPlot {
 public:
  SvgPlot(double width = 480, double height = 360) : width_(width), height_(height) {}

  void add_scatter(const Eigen::MatrixXd& xy, const std::vector<std::string>& labels = {}) {
    for (Eigen::Index i = 0; i < xy.rows(); ++i) {
      points_.push_back({xy(i, 0), xy(i, 1), labels.empty() ? "" : labels[static_cast<std::size_t>(i)]});
      extend(xy(i, 0), xy(i, 1));
    }
  }

  void add_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("svg line coordinate length mismatch");
    lines_.push_back({xs, ys});
    for (std::size_t i = 0; i < xs.size(); ++i) extend(xs[i], ys[i]);
  }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    const double margin = 40.0;
    const double sx = xmax_ > xmin_ ? (width_ - 2 * margin) / (xmax_ - xmin_) : 1.0;
    const double sy = ymax_ > ymin_ ? (height_ - 2 * margin) / (ymax_ - ymin_) : 1.0;
    auto px = [&](double x) { return margin + (x - xmin_) * sx; };
    auto py = [&](double y) { return height_ - margin - (y - ymin_) * sy; };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& line : lines_) {
      out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < line.xs.size(); ++i)
        out << format_double(px(line.xs[i])) << "," << format_double(py(line.ys[i])) << " ";
      out << "\"/>\n";
    }
    for (const auto& pt : points_) {
      out << "<circle cx=\"" << format_double(px(pt.x)) << "\" cy=\"" << format_double(py(pt.y))
          << "\" r=\"3.5\" fill=\"#d62728\"/>\n";
      if (!pt.label.empty())
        out << "<text x=\"" << format_double(px(pt.x) + 5) << "\" y=\"" << format_double(py(pt.y) - 5)
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << pt.label << "</text>\n";
    }
    out << "</svg>\n";
  }

 private:
  struct Point {
    double x, y;
    std::string label;
  };
  struct Line {
    std::vector<double> xs, ys;
  };

  void extend(double x, double y) {
    xmin_ = std::min(xmin_, x);
    xmax_ = std::max(xmax_, x);
    ymin_ = std::min(ymin_, y);
    ymax_ = std::max(ymax_, y);
  }

  double width_, height_;
  double xmin_ = 1e300, xmax_ = -1e300, ymin_ = 1e300, ymax_ = -1e300;
  std::vector<Point> points_;
  std::vector<Line> lines_;
};

}  // namespace mgw
