#include <catch_amalgamated.hpp>

#include "mgw/gw.hpp"
#include "mgw/rng.hpp"

using namespace mgw;

namespace {

MetricMeasureSpace random_space(int m, Rng& rng) {
  Eigen::MatrixXd pts(m, 2);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2; ++j) pts(i, j) = rng.next_double();
  MetricMeasureSpace mm;
  mm.D = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mm.D(i, j) = (pts.row(i) - pts.row(j)).norm();
  mm.w = Eigen::VectorXd(m);
  for (int i = 0; i < m; ++i) mm.w(i) = 0.2 + rng.next_double();
  mm.w /= mm.w.sum();
  for (int i = 0; i < m; ++i) mm.labels.push_back("v" + std::to_string(i));
  mm.validate();
  return mm;
}

MetricMeasureSpace two_point(double dist) {
  MetricMeasureSpace mm;
  mm.labels = {"v0", "v1"};
  mm.D = Eigen::MatrixXd::Zero(2, 2);
  mm.D(0, 1) = mm.D(1, 0) = dist;
  mm.w = Eigen::VectorXd(2);
  mm.w << 0.5, 0.5;
  return mm;
}

}  // namespace

TEST_CASE("factored quadratic objective equals the quadruple loop") {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const int m1 = 2 + static_cast<int>(rng.next_below(8));
    const int m2 = 2 + static_cast<int>(rng.next_below(8));
    Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(m1, m1), D2 = Eigen::MatrixXd::Zero(m2, m2);
    for (int i = 0; i < m1; ++i)
      for (int j = i + 1; j < m1; ++j) D1(i, j) = D1(j, i) = rng.next_double();
    for (int i = 0; i < m2; ++i)
      for (int j = i + 1; j < m2; ++j) D2(i, j) = D2(j, i) = rng.next_double();
    Eigen::MatrixXd pi(m1, m2);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < m2; ++j) pi(i, j) = rng.next_double();
    pi /= pi.sum();
    const double naive = gw_objective_naive(pi, D1, D2, 2);
    const double fact = gw_objective_factored2(pi, D1, D2);
    REQUIRE(fact == Catch::Approx(naive).epsilon(1e-9));
  }
}

TEST_CASE("self distance is numerically zero") {
  Rng rng(66);
  for (int trial = 0; trial < 10; ++trial) {
    auto mm = random_space(3 + static_cast<int>(rng.next_below(7)), rng);
    auto res = gw_hat_p(mm, mm);
    REQUIRE(res.value <= 1e-8);
  }
}

TEST_CASE("argument order does not matter") {
  Rng rng(77);
  auto X = random_space(5, rng);
  auto Y = random_space(7, rng);
  const double xy = gw_hat_p(X, Y).value;
  const double yx = gw_hat_p(Y, X).value;
  CHECK(xy == Catch::Approx(yx).margin(1e-12));
}

TEST_CASE("relabeling a space does not change the distance") {
  Rng rng(88);
  auto X = random_space(6, rng);
  auto Y = random_space(4, rng);
  // reverse the point order of X
  MetricMeasureSpace Xr = X;
  const int m = static_cast<int>(X.size());
  for (int i = 0; i < m; ++i) {
    Xr.w(i) = X.w(m - 1 - i);
    for (int j = 0; j < m; ++j) Xr.D(i, j) = X.D(m - 1 - i, m - 1 - j);
  }
  // generous restarts so both orderings settle into the same basin
  GWOptions opts;
  opts.restarts = 30;
  const double a = gw_hat_p(X, Y, opts).value;
  const double b = gw_hat_p(Xr, Y, opts).value;
  CHECK(a == Catch::Approx(b).margin(1e-6));
}

TEST_CASE("two-point uniform spaces follow the endpoint law") {
  // Quadratic objective along the one-parameter coupling family
  // pi = [[x, 1/2-x], [1/2-x, x]] is concave in x, so the optimum sits at an
  // endpoint with L = (alpha-beta)^2/2 and value |alpha-beta| / (2 sqrt 2).
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = 0.1 + 1.9 * rng.next_double();
    const double beta = 0.1 + 1.9 * rng.next_double();
    const double got = gw_hat_p(two_point(alpha), two_point(beta)).value;
    // independent check: grid over the coupling parameter
    double best = 1e300;
    for (int k = 0; k <= 10000; ++k) {
      const double x = 0.5 * k / 10000.0;
      const double L = 4 * x * (0.5 - x) * (alpha * alpha + beta * beta) +
                       2 * (x * x + (0.5 - x) * (0.5 - x)) * (alpha - beta) * (alpha - beta);
      best = std::min(best, L);
    }
    const double oracle = 0.5 * std::sqrt(best);
    REQUIRE(got == Catch::Approx(oracle).margin(1e-8));
    REQUIRE(got == Catch::Approx(std::abs(alpha - beta) / (2.0 * std::sqrt(2.0))).margin(1e-8));
  }
}

TEST_CASE("solver result is feasible") {
  Rng rng(111);
  auto X = random_space(6, rng);
  auto Y = random_space(5, rng);
  auto res = gw_hat_p(X, Y);
  REQUIRE(res.coupling.rows() == 6);
  REQUIRE(res.coupling.cols() == 5);
  CHECK(res.coupling.minCoeff() >= -1e-12);
  CHECK((res.coupling.rowwise().sum() - X.w).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((res.coupling.colwise().sum().transpose() - Y.w).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("p=1 path agrees with the naive objective at its own coupling") {
  Rng rng(222);
  auto X = random_space(4, rng);
  auto Y = random_space(4, rng);
  GWOptions opts;
  opts.p = 1;
  auto res = gw_hat_p(X, Y, opts);
  const double L = gw_objective_naive(res.coupling, X.D, Y.D, 1);
  CHECK(res.value == Catch::Approx(0.5 * L).margin(1e-9));
}
