#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mgw/io.hpp"
#include "mgw/rng.hpp"

using namespace mgw;

namespace {
std::filesystem::path tmp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("rng streams are deterministic and split-independent") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  // splitting must not depend on how much of the parent stream was consumed
  Rng fresh(7), consumed(7);
  for (int i = 0; i < 17; ++i) consumed.next_u64();
  Rng s1 = fresh.split(3), s2 = consumed.split(3);
  for (int i = 0; i < 100; ++i) REQUIRE(s1.next_u64() == s2.next_u64());

  Rng u = Rng(7).split(0), v = Rng(7).split(1);
  CHECK(u.next_u64() != v.next_u64());
}

TEST_CASE("rng doubles lie in [0,1) and next_below is in range") {
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.next_double();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
  for (int i = 0; i < 1000; ++i) REQUIRE(rng.next_below(13) < 13);
}

TEST_CASE("cloud CSV round trip with filter column") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0.0, 1.5, -2.25, 1e-17, 3.0, 0.1;
  PointCloud cloud(pts);
  auto f = FilterValues::from({0.5, -1.0, 2.0});
  const auto path = tmp_file("mgw_roundtrip.csv");
  save_cloud_csv(path.string(), cloud, &f);
  auto loaded = load_cloud_csv(path.string());
  REQUIRE(loaded.filter.has_value());
  REQUIRE(loaded.cloud.size() == 3);
  REQUIRE(loaded.cloud.dim() == 2);
  CHECK((loaded.cloud.points() - pts).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(loaded.filter->values[static_cast<std::size_t>(i)] == f.values[static_cast<std::size_t>(i)]);
  std::filesystem::remove(path);
}

TEST_CASE("csv loader reports bad rows with line numbers") {
  const auto path = tmp_file("mgw_bad.csv");
  std::ofstream(path) << "x0,x1\n1.0,2.0\n1.0\n";
  try {
    load_cloud_csv(path.string());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("off loader reads the bundled figure") {
  auto loaded = load_cloud("data/stick_figure.off", "off");
  CHECK(loaded.cloud.size() == 226);
  CHECK(loaded.cloud.dim() == 3);
  CHECK_FALSE(loaded.filter.has_value());
}

TEST_CASE("matrix CSV round trip preserves doubles exactly") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0 / 3, -7.25e-13, 42.0, 0.1, 0.2, 0.30000000000000004;
  const auto path = tmp_file("mgw_matrix.csv");
  save_matrix_csv(path.string(), m);
  CHECK((load_matrix_csv(path.string()) - m).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("format_double survives a parse round trip") {
  for (double x : {0.1, 1.0 / 3, 1e300, -2.5e-300, 12345.6789}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}
