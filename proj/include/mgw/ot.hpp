#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mgw {

struct OTResult {
  double cost = 0.0;
  Eigen::MatrixXd plan;
};

namespace detail {

/// Dense transportation network simplex. Exact (up to floating point) solver
/// for min <C, X> subject to row sums mu and column sums nu, X >= 0.
class TransportSimplex {
 public:
  TransportSimplex(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, const Eigen::MatrixXd& C)
      : mu_(mu), nu_(nu), C_(C), m1_(static_cast<int>(mu.size())), m2_(static_cast<int>(nu.size())) {
    if (C.rows() != m1_ || C.cols() != m2_) throw std::invalid_argument("cost matrix shape mismatch");
    if (C.minCoeff() < 0.0) throw std::invalid_argument("transport costs must be nonnegative");
    if ((mu.array() < 0.0).any() || (nu.array() < 0.0).any())
      throw std::invalid_argument("marginals must be nonnegative");
    if (std::abs(mu.sum() - nu.sum()) > 1e-9)
      throw std::invalid_argument("transport marginals must have equal mass");
  }

  OTResult solve() {
    northwest_corner();
    rebuild_tree();
    const double cmax = C_.cwiseAbs().maxCoeff();
    const double eps = 1e-12 * (1.0 + cmax);
    const long max_pivots = 2000L * (m1_ + m2_) + 20000L;
    const long bland_after = max_pivots / 2;
    for (long pivot = 0; pivot < max_pivots; ++pivot) {
      int ei = -1, ej = -1;
      if (!find_entering(eps, pivot >= bland_after, ei, ej)) break;
      do_pivot(ei, ej);
      rebuild_tree();
    }
    OTResult res;
    res.plan = Eigen::MatrixXd::Zero(m1_, m2_);
    for (std::size_t a = 0; a < basis_row_.size(); ++a)
      res.plan(basis_row_[a], basis_col_[a]) = std::max(0.0, basis_flow_[a]);
    res.cost = (res.plan.array() * C_.array()).sum();
    return res;
  }

 private:
  void northwest_corner() {
    Eigen::VectorXd ru = mu_, rv = nu_;
    int i = 0, j = 0;
    while (true) {
      const double f = std::min(ru(i), rv(j));
      basis_row_.push_back(i);
      basis_col_.push_back(j);
      basis_flow_.push_back(f);
      ru(i) -= f;
      rv(j) -= f;
      if (i == m1_ - 1 && j == m2_ - 1) break;
      if (j == m2_ - 1)
        ++i;
      else if (i == m1_ - 1)
        ++j;
      else if (ru(i) <= rv(j))
        ++i;
      else
        ++j;
    }
  }

  // Tree structure over nodes 0..m1-1 (rows) and m1..m1+m2-1 (cols), rooted
  // at node 0, with dual potentials satisfying u_i + v_j = C(i,j) on basic arcs.
  void rebuild_tree() {
    const int n = m1_ + m2_;
    adj_.assign(static_cast<std::size_t>(n), {});
    for (std::size_t a = 0; a < basis_row_.size(); ++a) {
      adj_[static_cast<std::size_t>(basis_row_[a])].push_back(static_cast<int>(a));
      adj_[static_cast<std::size_t>(m1_ + basis_col_[a])].push_back(static_cast<int>(a));
    }
    parent_.assign(static_cast<std::size_t>(n), -1);
    parent_arc_.assign(static_cast<std::size_t>(n), -1);
    depth_.assign(static_cast<std::size_t>(n), 0);
    pot_.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<int> stack{0};
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    seen[0] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int a : adj_[static_cast<std::size_t>(v)]) {
        const int r = basis_row_[static_cast<std::size_t>(a)];
        const int c = m1_ + basis_col_[static_cast<std::size_t>(a)];
        const int w = (v == r) ? c : r;
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = 1;
        parent_[static_cast<std::size_t>(w)] = v;
        parent_arc_[static_cast<std::size_t>(w)] = a;
        depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(v)] + 1;
        // u_i + v_j = C(i,j) on basic arcs, regardless of traversal direction
        pot_[static_cast<std::size_t>(w)] = C_(r, c - m1_) - pot_[static_cast<std::size_t>(v)];
        stack.push_back(w);
      }
    }
  }

  bool find_entering(double eps, bool bland, int& ei, int& ej) const {
    double best = -eps;
    for (int i = 0; i < m1_; ++i) {
      const double ui = pot_[static_cast<std::size_t>(i)];
      for (int j = 0; j < m2_; ++j) {
        const double rc = C_(i, j) - ui - pot_[static_cast<std::size_t>(m1_ + j)];
        if (rc < best) {
          best = rc;
          ei = i;
          ej = j;
          if (bland) return true;
        }
      }
    }
    return ei >= 0;
  }

  void do_pivot(int ei, int ej) {
    // Cycle: entering arc plus the tree path between its endpoints.
    int x = ei, y = m1_ + ej;
    std::vector<int> path_arcs;  // from the ej side back towards ei
    std::vector<int> xs, ys;
    while (x != y) {
      if (depth_[static_cast<std::size_t>(x)] >= depth_[static_cast<std::size_t>(y)]) {
        xs.push_back(parent_arc_[static_cast<std::size_t>(x)]);
        x = parent_[static_cast<std::size_t>(x)];
      } else {
        ys.push_back(parent_arc_[static_cast<std::size_t>(y)]);
        y = parent_[static_cast<std::size_t>(y)];
      }
    }
    // Order the cycle starting at the entering arc's column endpoint.
    path_arcs = ys;
    path_arcs.insert(path_arcs.end(), xs.rbegin(), xs.rend());

    // Arcs alternate -t, +t, -t, ... along the cycle.
    double t = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t k = 0; k < path_arcs.size(); ++k) {
      if (k % 2 == 0) {
        const double f = basis_flow_[static_cast<std::size_t>(path_arcs[k])];
        if (f < t || (f == t && path_arcs[k] < leaving)) {
          t = f;
          leaving = path_arcs[k];
        }
      }
    }
    for (std::size_t k = 0; k < path_arcs.size(); ++k)
      basis_flow_[static_cast<std::size_t>(path_arcs[k])] += (k % 2 == 0) ? -t : t;
    basis_row_[static_cast<std::size_t>(leaving)] = ei;
    basis_col_[static_cast<std::size_t>(leaving)] = ej;
    basis_flow_[static_cast<std::size_t>(leaving)] = t;
  }

  Eigen::VectorXd mu_, nu_;
  Eigen::MatrixXd C_;
  int m1_, m2_;
  std::vector<int> basis_row_, basis_col_;
  std::vector<double> basis_flow_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_, parent_arc_, depth_;
  std::vector<double> pot_;
};

}  // namespace detail

/// Exact linear optimal transport (network simplex).
inline OTResult solve_transport(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                                const Eigen::MatrixXd& C) {
  return detail::TransportSimplex(mu, nu, C).solve();
}

/// Entropic approximation (Sinkhorn scaling), marginal violation < 1e-10.
inline OTResult solve_transport_entropic(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                                         const Eigen::MatrixXd& C, double eps_reg, int max_iter = 10000) {
  if (!(eps_reg > 0.0)) throw std::invalid_argument("entropic regularization must be positive");
  const Eigen::MatrixXd K = (-C / eps_reg).array().exp();
  Eigen::VectorXd u = Eigen::VectorXd::Ones(mu.size());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(nu.size());
  for (int it = 0; it < max_iter; ++it) {
    u = mu.array() / (K * v).array().max(1e-300);
    v = nu.array() / (K.transpose() * u).array().max(1e-300);
    if (it % 10 == 9) {
      const Eigen::MatrixXd plan = u.asDiagonal() * K * v.asDiagonal();
      const double err = (plan.rowwise().sum() - mu).cwiseAbs().maxCoeff() +
                         (plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff();
      if (err < 1e-10) break;
    }
  }
  OTResult res;
  res.plan = u.asDiagonal() * K * v.asDiagonal();
  res.cost = (res.plan.array() * C.array()).sum();
  return res;
}

/// p-Wasserstein distance between weight vectors on a shared metric space.
/// Returns ((sum D^p pi)^(1/p), pi) at an exact optimum.
inline std::pair<double, Eigen::MatrixXd> wasserstein_p(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                                                        const Eigen::MatrixXd& D, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("wasserstein order must satisfy p >= 1");
  if (std::abs(mu.sum() - 1.0) > 1e-9 || std::abs(nu.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("wasserstein marginals must sum to 1");
  const Eigen::MatrixXd C = D.array().pow(p);
  auto res = solve_transport(mu, nu, C);
  return {std::pow(res.cost, 1.0 / p), std::move(res.plan)};
}

}  // namespace mgw
