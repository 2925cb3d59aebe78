#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mgw/mm_space.hpp"
#include "mgw/ot.hpp"
#include "mgw/rng.hpp"

namespace mgw {

struct GWOptions {
  int p = 2;  // {1, 2}
  int restarts = 3;
  int max_iter = 1000;
  double tol = 1e-9;
  bool entropic_inner = false;
  double eps_reg = 5e-2;
  std::uint64_t seed = 42;

  void validate() const {
    if (p != 1 && p != 2) throw std::invalid_argument("gw order p must be 1 or 2");
    if (restarts < 1) throw std::invalid_argument("gw restarts must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("gw max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("gw tol must be positive");
  }
};

struct GWResult {
  double value = 0.0;
  Eigen::MatrixXd coupling;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
};

/// Naive quartic sum L(pi) = sum |D1(i,i') - D2(j,j')|^p pi(i,j) pi(i',j').
inline double gw_objective_naive(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& D1,
                                 const Eigen::MatrixXd& D2, int p) {
  const Eigen::Index m1 = D1.rows(), m2 = D2.rows();
  if (pi.rows() != m1 || pi.cols() != m2) throw std::invalid_argument("coupling shape mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < m1; ++i)
    for (Eigen::Index j = 0; j < m2; ++j) {
      const double pij = pi(i, j);
      if (pij == 0.0) continue;
      for (Eigen::Index i2 = 0; i2 < m1; ++i2)
        for (Eigen::Index j2 = 0; j2 < m2; ++j2) {
          const double diff = std::abs(D1(i, i2) - D2(j, j2));
          total += (p == 1 ? diff : diff * diff) * pij * pi(i2, j2);
        }
    }
  return total;
}

/// Factored evaluation for p=2 using |a-b|^2 = a^2 + b^2 - 2ab:
/// L = r' (D1 o D1) r + c' (D2 o D2) c - 2 <pi, D1 pi D2>, with r, c the
/// marginals of pi. O(m1 m2 (m1 + m2)) instead of O(m1^2 m2^2).
inline double gw_objective_factored2(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& D1,
                                     const Eigen::MatrixXd& D2) {
  const Eigen::VectorXd r = pi.rowwise().sum();
  const Eigen::VectorXd c = pi.colwise().sum().transpose();
  const double t1 = r.dot(D1.cwiseProduct(D1) * r);
  const double t2 = c.dot(D2.cwiseProduct(D2) * c);
  const double cross = (pi.cwiseProduct(D1 * pi * D2)).sum();
  return t1 + t2 - 2.0 * cross;
}

inline double gw_objective(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& D1,
                           const Eigen::MatrixXd& D2, int p) {
  if (p == 2) return gw_objective_factored2(pi, D1, D2);
  return gw_objective_naive(pi, D1, D2, p);
}

namespace detail {

inline Eigen::MatrixXd gw_gradient(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& D1,
                                   const Eigen::MatrixXd& D2, int p) {
  if (p == 2) {
    const Eigen::VectorXd r = pi.rowwise().sum();
    const Eigen::VectorXd c = pi.colwise().sum().transpose();
    const Eigen::VectorXd s1 = D1.cwiseProduct(D1) * r;
    const Eigen::VectorXd s2 = D2.cwiseProduct(D2) * c;
    Eigen::MatrixXd grad = -4.0 * (D1 * pi * D2);
    grad.colwise() += 2.0 * s1;
    grad.rowwise() += (2.0 * s2).transpose();
    return grad;
  }
  const Eigen::Index m1 = D1.rows(), m2 = D2.rows();
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(m1, m2);
  for (Eigen::Index i = 0; i < m1; ++i)
    for (Eigen::Index j = 0; j < m2; ++j) {
      double g = 0.0;
      for (Eigen::Index i2 = 0; i2 < m1; ++i2)
        for (Eigen::Index j2 = 0; j2 < m2; ++j2)
          g += std::abs(D1(i, i2) - D2(j, j2)) * pi(i2, j2);
      grad(i, j) = 2.0 * g;
    }
  return grad;
}

/// Conditional-gradient descent of the quadratic objective from one start.
inline void gw_frank_wolfe(Eigen::MatrixXd& pi, const MetricMeasureSpace& X, const MetricMeasureSpace& Y,
                           const GWOptions& opts, double& obj, int& iterations, bool& converged) {
  obj = gw_objective(pi, X.D, Y.D, opts.p);
  converged = false;
  iterations = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    iterations = it + 1;
    if (obj <= opts.tol * opts.tol) {
      converged = true;
      break;
    }
    Eigen::MatrixXd grad = gw_gradient(pi, X.D, Y.D, opts.p);
    const double gmin = grad.minCoeff();
    if (gmin < 0.0) grad.array() -= gmin;  // simplex shift, keeps argmin and costs nonnegative
    const Eigen::MatrixXd target = opts.entropic_inner
                                       ? solve_transport_entropic(X.w, Y.w, grad, opts.eps_reg).plan
                                       : solve_transport(X.w, Y.w, grad).plan;
    const Eigen::MatrixXd delta = target - pi;
    const double gap = grad.cwiseProduct(delta).sum();
    if (gap >= -opts.tol * (1.0 + std::abs(obj))) {
      converged = true;
      break;
    }
    double step = 1.0;
    if (opts.p == 2) {
      // L restricted to the segment is a univariate quadratic:
      // L(pi + t delta) = L(pi) + t <grad, delta> + t^2 B(delta, delta),
      // and delta has zero marginals so B(delta,delta) = -2 <delta, D1 delta D2>.
      const double quad = -2.0 * (delta.cwiseProduct(X.D * delta * Y.D)).sum();
      if (quad > 0.0)
        step = std::clamp(-0.5 * gap / quad, 0.0, 1.0);
      else
        step = 1.0;
    } else {
      // Armijo backtracking
      const double slope = gap;
      step = 1.0;
      while (step > 1e-12) {
        const double trial = gw_objective(pi + step * delta, X.D, Y.D, opts.p);
        if (trial <= obj + 1e-4 * step * slope) break;
        step *= 0.5;
      }
    }
    const double new_obj = gw_objective(pi + step * delta, X.D, Y.D, opts.p);
    if (new_obj > obj + 1e-12 * (1.0 + std::abs(obj)))
      break;  // numerical stall, keep the current iterate
    pi += step * delta;
    const double decrease = obj - new_obj;
    obj = std::max(new_obj, 0.0);
    if (decrease <= opts.tol * std::max(1.0, std::abs(obj))) {
      converged = true;
      break;
    }
  }
}

inline Eigen::MatrixXd random_feasible_coupling(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                                                Rng& rng) {
  Eigen::MatrixXd M(mu.size(), nu.size());
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = (0.05 + rng.next_double()) * mu(i) * nu(j);
  // Sinkhorn scaling onto the prescribed marginals
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd r = M.rowwise().sum();
    M.array().colwise() *= (mu.array() / r.array().max(1e-300));
    const Eigen::VectorXd c = M.colwise().sum().transpose();
    M.array().rowwise() *= (nu.array() / c.array().max(1e-300)).transpose();
    const double err = (M.rowwise().sum() - mu).cwiseAbs().maxCoeff() +
                       (M.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff();
    if (err < 1e-12) break;
  }
  return M;
}

inline std::vector<Eigen::MatrixXd> gw_starts(const MetricMeasureSpace& X, const MetricMeasureSpace& Y,
                                              const GWOptions& opts) {
  std::vector<Eigen::MatrixXd> starts;
  starts.push_back(X.w * Y.w.transpose());  // product coupling
  int deterministic = 1;
  const bool same_weights = X.size() == Y.size() && (X.w - Y.w).cwiseAbs().maxCoeff() < 1e-12;
  if (same_weights) {
    starts.push_back(Eigen::MatrixXd(X.w.asDiagonal()));  // identity coupling
    deterministic = 2;
    // For tiny uniform square instances, seed from every permutation; the
    // descent from each start then dominates that permutation's value.
    const bool uniform = (X.w.array() - 1.0 / static_cast<double>(X.size())).abs().maxCoeff() < 1e-12;
    if (uniform && X.size() <= 5) {
      std::vector<int> perm(static_cast<std::size_t>(X.size()));
      std::iota(perm.begin(), perm.end(), 0);
      while (std::next_permutation(perm.begin(), perm.end())) {
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(X.size(), Y.size());
        for (Eigen::Index i = 0; i < X.size(); ++i) P(i, perm[static_cast<std::size_t>(i)]) = X.w(i);
        starts.push_back(std::move(P));
      }
    }
  }
  Rng rng(opts.seed);
  for (int k = deterministic; k < opts.restarts; ++k)
    starts.push_back(random_feasible_coupling(X.w, Y.w, rng));
  return starts;
}

inline GWResult gw_hat_one_direction(const MetricMeasureSpace& X, const MetricMeasureSpace& Y,
                                     const GWOptions& opts) {
  GWResult best;
  best.value = std::numeric_limits<double>::infinity();
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& start : gw_starts(X, Y, opts)) {
    Eigen::MatrixXd pi = start;
    double obj = 0.0;
    int iters = 0;
    bool conv = false;
    gw_frank_wolfe(pi, X, Y, opts, obj, iters, conv);
    ++best.restarts_used;
    if (obj < best_obj) {
      best_obj = obj;
      best.coupling = std::move(pi);
      best.iterations = iters;
      best.converged = conv;
    }
  }
  best.value = 0.5 * std::pow(std::max(best_obj, 0.0), 1.0 / opts.p);
  return best;
}

}  // namespace detail

/// Estimator of the Gromov-Wasserstein distance: local minimum of the
/// quadratic relaxation over the transportation polytope, best over restarts
/// and over both argument orders. Returned values are upper bounds on the
/// global optimum.
inline GWResult gw_hat_p(const MetricMeasureSpace& X, const MetricMeasureSpace& Y, GWOptions opts = {}) {
  opts.validate();
  X.validate();
  Y.validate();
  GWResult fwd = detail::gw_hat_one_direction(X, Y, opts);
  GWResult bwd = detail::gw_hat_one_direction(Y, X, opts);
  if (bwd.value < fwd.value) {
    bwd.coupling = Eigen::MatrixXd(bwd.coupling.transpose());
    bwd.restarts_used += fwd.restarts_used;
    return bwd;
  }
  fwd.restarts_used += bwd.restarts_used;
  return fwd;
}

}  // namespace mgw
