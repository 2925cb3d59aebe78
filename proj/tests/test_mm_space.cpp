#include <catch_amalgamated.hpp>

#include <filesystem>

#include "mgw/mm_space.hpp"
#include "mgw/rng.hpp"

using namespace mgw;

namespace {
PointCloud line_cloud(std::initializer_list<double> xs) {
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) pts(i++, 0) = x;
  return PointCloud(pts);
}
}  // namespace

TEST_CASE("hausdorff distance on the line") {
  auto cloud = line_cloud({0.0, 10.0, 4.0});
  BoundMetric metric(cloud, AmbientMetric::euclidean());
  CHECK(hausdorff({0, 1}, {2}, metric) == Catch::Approx(6.0));
  CHECK(hausdorff({2}, {0, 1}, metric) == Catch::Approx(6.0));
  CHECK(hausdorff({0, 1}, {0, 1}, metric) == 0.0);
}

TEST_CASE("hausdorff conventions for empty sets") {
  auto cloud = line_cloud({0.0, 3.0});
  BoundMetric metric(cloud, AmbientMetric::euclidean());
  CHECK(hausdorff({}, {}, metric) == 0.0);
  CHECK(hausdorff({0}, {}, metric) == Catch::Approx(3.0));  // Diam of the cloud
  CHECK(hausdorff({}, {0, 1}, metric) == Catch::Approx(3.0));
}

TEST_CASE("hausdorff matches a brute-force oracle on random pairs") {
  Rng rng(31);
  Eigen::MatrixXd pts(30, 2);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 2; ++j) pts(i, j) = rng.next_double();
  PointCloud cloud(pts);
  BoundMetric metric(cloud, AmbientMetric::euclidean());
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> A, B;
    for (int i = 0; i < 30; ++i) {
      if (rng.next_double() < 0.2 && A.size() < 8) A.push_back(i);
      if (rng.next_double() < 0.2 && B.size() < 8) B.push_back(i);
    }
    if (A.empty() || B.empty()) continue;
    double sup = 0.0;
    for (int a : A) {
      double inf = 1e300;
      for (int b : B) inf = std::min(inf, (pts.row(a) - pts.row(b)).norm());
      sup = std::max(sup, inf);
    }
    for (int b : B) {
      double inf = 1e300;
      for (int a : A) inf = std::min(inf, (pts.row(a) - pts.row(b)).norm());
      sup = std::max(sup, inf);
    }
    REQUIRE(hausdorff(A, B, metric) == sup);
  }
}

TEST_CASE("mapper mm-space drops empty representatives and renormalizes nothing") {
  auto cloud = line_cloud({0, 1, 2, 3, 4});
  auto filter = FilterValues::from({0, 1, 2, 3, 4});
  auto mapper = build_mapper(cloud, AmbientMetric::euclidean(), filter, build_cover(filter, 2, 0.3),
                             ClustererSpec::epsilon_graph(1.5));
  BoundMetric metric(cloud, AmbientMetric::euclidean());
  auto mm = mapper_to_mm(mapper, metric);
  REQUIRE(mm.size() == 3);
  CHECK(mm.w.sum() == Catch::Approx(1.0).margin(1e-12));
  CHECK(mm.labels[0] == "v0");
  CHECK(mm.labels[2] == "e0-1");
  // distance between the two vertex representatives {0,1} and {3,4}
  CHECK(mm.D(0, 1) == Catch::Approx(3.0));
  CHECK(mm.D(0, 0) == 0.0);
  CHECK((mm.D - mm.D.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mm-space json round trip") {
  MetricMeasureSpace mm;
  mm.labels = {"v0", "v1"};
  mm.D = Eigen::MatrixXd::Zero(2, 2);
  mm.D(0, 1) = mm.D(1, 0) = 1.25;
  mm.w = Eigen::VectorXd(2);
  mm.w << 0.75, 0.25;
  mm.validate();

  const auto path = (std::filesystem::temp_directory_path() / "mgw_mm.json").string();
  save_mm_space(path, mm);
  auto back = load_mm_space(path);
  CHECK(back.labels == mm.labels);
  CHECK((back.D - mm.D).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.w - mm.w).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("mm-space validation catches bad inputs") {
  MetricMeasureSpace mm;
  mm.labels = {"a", "b"};
  mm.D = Eigen::MatrixXd::Zero(2, 2);
  mm.D(0, 1) = 1.0;
  mm.D(1, 0) = 2.0;  // asymmetric
  mm.w = Eigen::VectorXd(2);
  mm.w << 0.5, 0.5;
  CHECK_THROWS_AS(mm.validate(), std::invalid_argument);
  mm.D(1, 0) = 1.0;
  mm.w << 0.9, 0.3;  // masses exceed 1
  CHECK_THROWS_AS(mm.validate(), std::invalid_argument);
}
