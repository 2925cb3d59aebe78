#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mgw {

/// Classical multidimensional scaling: double-center -1/2 J (D o D) J, take
/// the top eigenpairs (negative eigenvalues clamped to zero), coordinates are
/// eigenvectors scaled by sqrt(eigenvalue). Sign convention: the first
/// nonzero coordinate of each axis is nonnegative.
inline Eigen::MatrixXd classical_mds(const Eigen::MatrixXd& D, int dim = 2) {
  const Eigen::Index m = D.rows();
  if (D.cols() != m) throw std::invalid_argument("mds distance matrix must be square");
  if (dim < 1 || dim > m) throw std::invalid_argument("mds target dimension out of range");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(D(i, i)) > 1e-12) throw std::invalid_argument("mds matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < m; ++j)
      if (std::abs(D(i, j) - D(j, i)) > 1e-9) throw std::invalid_argument("mds matrix must be symmetric");
  }

  const Eigen::MatrixXd D2 = D.cwiseProduct(D);
  const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / m);
  const Eigen::MatrixXd B = -0.5 * (J * D2 * J);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success) throw std::runtime_error("mds eigendecomposition failed");
  // eigenvalues are ascending; take the largest `dim`
  Eigen::MatrixXd coords(m, dim);
  for (int k = 0; k < dim; ++k) {
    const Eigen::Index idx = m - 1 - k;
    const double lam = std::max(es.eigenvalues()(idx), 0.0);
    coords.col(k) = es.eigenvectors().col(idx) * std::sqrt(lam);
  }
  for (int k = 0; k < dim; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (coords(i, k) != 0.0) {
        if (coords(i, k) < 0.0) coords.col(k) = -coords.col(k);
        break;
      }
    }
  }
  return coords;
}

}  // namespace mgw
