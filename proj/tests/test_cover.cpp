#include <catch_amalgamated.hpp>

#include "mgw/cover.hpp"
#include "mgw/point_cloud.hpp"

using namespace mgw;

TEST_CASE("two-interval cover on [0,1]") {
  auto f = FilterValues::from({0.0, 1.0});
  auto cover = build_cover(f, 2, 0.3);
  REQUIRE(cover.r == 2);
  REQUIRE(cover.width() == Catch::Approx(0.5).margin(1e-15));
  // hand-evaluated: pad = g/(2-2g) * W = (3/14) * 0.5
  CHECK(cover.intervals[0].lo == Catch::Approx(-3.0 / 28).margin(1e-12));
  CHECK(cover.intervals[0].hi == Catch::Approx(17.0 / 28).margin(1e-12));
  CHECK(cover.intervals[1].lo == Catch::Approx(11.0 / 28).margin(1e-12));
  CHECK(cover.intervals[1].hi == Catch::Approx(31.0 / 28).margin(1e-12));
}

TEST_CASE("refinement of the two-interval cover") {
  auto f = FilterValues::from({0.0, 1.0});
  auto refined = refine_cover(build_cover(f, 2, 0.3));
  REQUIRE(refined.pieces.size() == 3);
  CHECK(refined.pieces[0].tag == RefinedCover::Tag::Plain);
  CHECK(refined.pieces[1].tag == RefinedCover::Tag::Intersection);
  CHECK(refined.pieces[2].tag == RefinedCover::Tag::Plain);
  CHECK(refined.pieces[1].interval.lo == Catch::Approx(11.0 / 28).margin(1e-12));
  CHECK(refined.pieces[1].interval.hi == Catch::Approx(17.0 / 28).margin(1e-12));
  double min_w = 1e300;
  for (const auto& p : refined.pieces) min_w = std::min(min_w, p.interval.hi - p.interval.lo);
  CHECK(min_w == Catch::Approx((0.3 / 0.7) * 0.5).margin(1e-15));
}

TEST_CASE("adjacent intervals overlap and non-adjacent ones do not") {
  auto f = FilterValues::from({-2.0, 5.0});
  for (int r : {2, 3, 7, 11}) {
    for (double g : {0.05, 0.2, 0.45}) {
      auto cover = build_cover(f, r, g);
      for (int j = 0; j + 1 < r; ++j) {
        CHECK(cover.intervals[j].hi > cover.intervals[j + 1].lo);
        if (j + 2 < r) CHECK(cover.intervals[j].hi < cover.intervals[j + 2].lo);
      }
      CHECK(cover.intervals.front().lo < -2.0);
      CHECK(cover.intervals.back().hi > 5.0);
    }
  }
}

TEST_CASE("cover rejects bad parameters") {
  auto f = FilterValues::from({0.0, 1.0});
  CHECK_THROWS_AS(build_cover(f, 0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(build_cover(f, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_cover(f, 2, 0.5), std::invalid_argument);
  auto flat = FilterValues::from({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(build_cover(flat, 2, 0.3), std::invalid_argument);
}

TEST_CASE("refined pieces tile the covered range") {
  auto f = FilterValues::from({0.0, 1.0});
  for (int r : {1, 2, 5}) {
    auto cover = build_cover(f, r, 0.25);
    auto refined = refine_cover(cover);
    REQUIRE(refined.pieces.size() == static_cast<std::size_t>(2 * r - 1));
    for (std::size_t k = 0; k + 1 < refined.pieces.size(); ++k)
      CHECK(refined.pieces[k].interval.hi == Catch::Approx(refined.pieces[k + 1].interval.lo).margin(1e-12));
    // every filter value between the cover endpoints lands in exactly one piece
    for (double t = 0.0; t <= 1.0; t += 0.01) {
      const int k = refined.piece_of(t);
      REQUIRE(k >= 0);
      CHECK(refined.pieces[static_cast<std::size_t>(k)].interval.contains(t));
    }
  }
}
