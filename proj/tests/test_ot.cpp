#include <catch_amalgamated.hpp>

#include "mgw/ot.hpp"
#include "mgw/rng.hpp"

using namespace mgw;

namespace {

// exhaustive minimum over 2x2 transportation plans (one free parameter)
double brute_2x2(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, const Eigen::MatrixXd& C) {
  const double lo = std::max(0.0, mu(0) - nu(1));
  const double hi = std::min(mu(0), nu(0));
  auto cost = [&](double x) {
    return C(0, 0) * x + C(0, 1) * (mu(0) - x) + C(1, 0) * (nu(0) - x) + C(1, 1) * (nu(1) - mu(0) + x);
  };
  return std::min(cost(lo), cost(hi));  // linear in x, so an endpoint is optimal
}

}  // namespace

TEST_CASE("textbook 2x2 transport instance") {
  Eigen::VectorXd mu(2), nu(2);
  mu << 0.7, 0.3;
  nu << 0.4, 0.6;
  Eigen::MatrixXd D(2, 2);
  D << 1, 2, 3, 1;
  auto [value, plan] = wasserstein_p(mu, nu, D, 1.0);
  CHECK(value == Catch::Approx(1.3).margin(1e-12));
  CHECK((plan.rowwise().sum() - mu).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("network simplex matches the 2x2 oracle on random instances") {
  Rng rng(404);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd mu(2), nu(2);
    const double a = 0.05 + 0.9 * rng.next_double();
    const double b = 0.05 + 0.9 * rng.next_double();
    mu << a, 1 - a;
    nu << b, 1 - b;
    Eigen::MatrixXd C(2, 2);
    for (int i = 0; i < 4; ++i) C(i / 2, i % 2) = rng.next_double();
    auto res = solve_transport(mu, nu, C);
    REQUIRE(res.cost == Catch::Approx(brute_2x2(mu, nu, C)).margin(1e-12));
  }
}

TEST_CASE("identical marginals on a metric cost give zero distance") {
  Eigen::VectorXd mu(3);
  mu << 0.2, 0.5, 0.3;
  Eigen::MatrixXd D(3, 3);
  D << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  auto [value, plan] = wasserstein_p(mu, mu, D, 2.0);
  CHECK(value == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("entropic plan approaches the exact optimum") {
  Rng rng(17);
  Eigen::VectorXd mu(4), nu(5);
  for (int i = 0; i < 4; ++i) mu(i) = 0.1 + rng.next_double();
  for (int j = 0; j < 5; ++j) nu(j) = 0.1 + rng.next_double();
  mu /= mu.sum();
  nu /= nu.sum();
  Eigen::MatrixXd C(4, 5);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) C(i, j) = rng.next_double();
  const double exact = solve_transport(mu, nu, C).cost;
  const double ent = solve_transport_entropic(mu, nu, C, 1e-3).cost;
  CHECK(ent >= exact - 1e-9);
  CHECK(ent == Catch::Approx(exact).margin(1e-2));
}

TEST_CASE("degenerate marginals (zeros after deduplication are rejected)") {
  Eigen::VectorXd mu(2), nu(2);
  mu << 1.0, 0.5;  // sums differ
  nu << 0.4, 0.6;
  Eigen::MatrixXd C = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(solve_transport(mu, nu, C), std::invalid_argument);
}
