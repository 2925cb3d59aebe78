#include <catch_amalgamated.hpp>

#include "mgw/experiments.hpp"

using namespace mgw;

TEST_CASE("median of odd and even length vectors") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("spearman correlation with and without ties") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == Catch::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {40, 30, 20, 10}) == Catch::Approx(-1.0));
  // frozen value for a tied series: ranks of x are {1, 2.5, 2.5, 4}
  const double rho = spearman({1, 2, 2, 3}, {1, 2, 3, 4});
  CHECK(rho == Catch::Approx(0.9486832980505138).margin(1e-12));
}

TEST_CASE("log-log slope of an exact power law") {
  std::vector<double> xs{10, 100, 1000}, ys;
  for (double x : xs) ys.push_back(5.0 * std::pow(x, -0.37));
  CHECK(fit_loglog_slope(xs, ys) == Catch::Approx(-0.37).margin(1e-12));
  CHECK_THROWS_AS(fit_loglog_slope({1.0, 2.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("resolution schedule of the rate study") {
  CHECK(convergence_resolution(250, 1.0, 1.0) == 6);    // 250^(1/3)
  CHECK(convergence_resolution(4000, 1.0, 1.0) == 16);  // 4000^(1/3)
  CHECK(convergence_resolution(1000, 2.0, 1.0) == 20);
}

TEST_CASE("filter sweep on a small torus sample behaves sanely") {
  TorusParams tp;
  tp.p = 1.0 / 6;
  tp.q = 1.0 / 6;
  auto cloud = sample_torus(tp, 800, 3);
  Eigen::VectorXd u(3), v(3);
  u << 0, 0, 1;
  v << 1, 0, 0;
  MapperParams params;
  params.r = 8;
  params.g = 0.3;
  params.clusterer = ClustererSpec::epsilon_graph(0.2);
  GWOptions opts;
  auto report = run_filter_sweep(cloud, u, v, {0.0, 0.5, 1.0}, params, opts);
  REQUIRE(report.gw_values.size() == 3);
  CHECK(report.gw_values[0] <= 1e-8);
  CHECK(report.sup_norms[0] == 0.0);
  CHECK(report.gw_values[1] >= 0.0);
  // threading must not change the numbers
  auto report8 = run_filter_sweep(cloud, u, v, {0.0, 0.5, 1.0}, params, opts, 8);
  for (int k = 0; k < 3; ++k) CHECK(report.gw_values[static_cast<std::size_t>(k)] == report8.gw_values[static_cast<std::size_t>(k)]);
}

TEST_CASE("sweep input validation") {
  TorusParams tp;
  tp.p = 0.2;
  tp.q = 0.2;
  auto cloud = sample_torus(tp, 100, 1);
  Eigen::VectorXd u(3), v(3);
  u << 0, 0, 2;  // not unit
  v << 1, 0, 0;
  MapperParams params;
  CHECK_THROWS_AS(run_filter_sweep(cloud, u, v, {0.0, 1.0}, params, {}), std::invalid_argument);
  u << 0, 0, 1;
  CHECK_THROWS_AS(run_filter_sweep(cloud, u, v, {0.5, 1.0}, params, {}), std::invalid_argument);
}

TEST_CASE("point-set hausdorff helper") {
  Eigen::MatrixXd A(2, 1), B(1, 1);
  A << 0.0, 10.0;
  B << 4.0;
  CHECK(hausdorff_points(A, B) == Catch::Approx(6.0));
  CHECK_THROWS_AS(hausdorff_points(Eigen::MatrixXd(0, 1), B), std::invalid_argument);
}

TEST_CASE("decomposition diagnostic on a dense segment is small") {
  // sample and reference both fill [0,1]; level sets are single points, so
  // A_n is driven by the representative spread, bounded by the diameter
  const int n = 60, nref = 600;
  Eigen::MatrixXd pts(n, 1), ref(nref, 1);
  for (int i = 0; i < n; ++i) pts(i, 0) = (i + 0.5) / n;
  for (int i = 0; i < nref; ++i) ref(i, 0) = (i + 0.5) / nref;
  PointCloud cloud(pts), ref_cloud(ref);
  auto filter = FilterValues::from(std::vector<double>(pts.data(), pts.data() + n));
  auto ref_filter = FilterValues::from(std::vector<double>(ref.data(), ref.data() + nref));
  auto mapper = build_mapper(cloud, AmbientMetric::euclidean(), filter, build_cover(filter, 6, 0.3),
                             ClustererSpec::epsilon_graph(0.1));
  auto diag = decomposition_diagnostic(cloud, filter, mapper, ref_cloud, ref_filter, 0.05, 2, 0.01);
  CHECK(diag.A_n > 0.0);
  CHECK(diag.A_n <= diameter(cloud, AmbientMetric::euclidean()) + 1e-12);
}
