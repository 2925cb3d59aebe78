#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgw {

/// Finite sample of ambient points. Point ids are the row indices 0..n-1.
class PointCloud {
 public:
  PointCloud() = default;

  explicit PointCloud(Eigen::MatrixXd points) : points_(std::move(points)) {
    if (points_.rows() < 1) throw std::invalid_argument("point cloud must contain at least one point");
    if (points_.cols() < 1) throw std::invalid_argument("ambient dimension must be >= 1");
    if (!points_.allFinite()) throw std::invalid_argument("point cloud contains non-finite coordinates");
  }

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::RowVectorXd point(Eigen::Index i) const { return points_.row(i); }

  double distance(Eigen::Index i, Eigen::Index j) const {
    return (points_.row(i) - points_.row(j)).norm();
  }

 private:
  Eigen::MatrixXd points_;
};

/// Scalar filter values attached to a cloud.
struct FilterValues {
  std::vector<double> values;
  double min_f = 0.0;
  double max_f = 0.0;

  static FilterValues from(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("filter values must be nonempty");
    FilterValues f;
    f.min_f = v[0];
    f.max_f = v[0];
    for (double x : v) {
      if (!std::isfinite(x)) throw std::invalid_argument("filter values must be finite");
      f.min_f = std::min(f.min_f, x);
      f.max_f = std::max(f.max_f, x);
    }
    f.values = std::move(v);
    return f;
  }

  std::size_t size() const { return values.size(); }
};

/// values[i] = <x_i, direction>, no normalization requirement on direction.
inline FilterValues linear_filter(const PointCloud& cloud, const Eigen::VectorXd& direction) {
  if (direction.size() != cloud.dim()) throw std::invalid_argument("filter direction dimension mismatch");
  Eigen::VectorXd v = cloud.points() * direction;
  return FilterValues::from(std::vector<double>(v.data(), v.data() + v.size()));
}

/// Projection onto a unit vector.
inline FilterValues height_filter(const PointCloud& cloud, const Eigen::VectorXd& direction) {
  if (direction.size() != cloud.dim()) throw std::invalid_argument("filter direction dimension mismatch");
  const double nrm = direction.norm();
  if (nrm == 0.0) throw std::invalid_argument("filter direction must be nonzero");
  if (std::abs(nrm - 1.0) > 1e-9) throw std::invalid_argument("filter direction must be a unit vector");
  return linear_filter(cloud, direction);
}

}  // namespace mgw
