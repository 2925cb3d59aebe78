#pragma once

#include <stdexcept>
#include <vector>

#include "mgw/point_cloud.hpp"

namespace mgw {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Homogeneous interval cover of the filter range: r equal-length closed
/// intervals, consecutive ones sharing a fraction g of their length.
struct CoverScheme {
  int r = 1;
  double g = 0.3;
  double min_f = 0.0;
  double max_f = 0.0;
  std::vector<Interval> intervals;

  double width() const { return (max_f - min_f) / r; }  // maximal refined width W(r)
};

inline CoverScheme build_cover(const FilterValues& filter, int r, double g) {
  if (r < 1) throw std::invalid_argument("cover resolution must be >= 1");
  if (!(g > 0.0 && g < 0.5)) throw std::invalid_argument("cover gain must lie in (0, 1/2)");
  if (!(filter.max_f > filter.min_f)) throw std::invalid_argument("degenerate filter range");
  CoverScheme cover;
  cover.r = r;
  cover.g = g;
  cover.min_f = filter.min_f;
  cover.max_f = filter.max_f;
  const double w = (filter.max_f - filter.min_f) / r;
  const double overhang = g / (2.0 - 2.0 * g) * w;
  cover.intervals.reserve(static_cast<std::size_t>(r));
  for (int j = 1; j <= r; ++j) {
    cover.intervals.push_back(
        {filter.min_f + (j - 1) * w - overhang, filter.min_f + j * w + overhang});
  }
  return cover;
}

/// Elementary blocks of the cover: set differences alternating with pairwise
/// intersections of consecutive intervals, in filter order.
struct RefinedCover {
  enum class Tag { Plain, Intersection };
  struct Piece {
    Interval interval;
    Tag tag;
  };
  std::vector<Piece> pieces;

  /// Index of the piece containing x; boundary points go to the lower piece.
  int piece_of(double x) const {
    for (std::size_t k = 0; k < pieces.size(); ++k)
      if (pieces[k].interval.contains(x)) return static_cast<int>(k);
    // clamp values that fall outside by floating-point slop
    return x < pieces.front().interval.lo ? 0 : static_cast<int>(pieces.size()) - 1;
  }
};

inline RefinedCover refine_cover(const CoverScheme& cover) {
  RefinedCover refined;
  const auto& iv = cover.intervals;
  const int r = cover.r;
  if (r == 1) {
    refined.pieces.push_back({iv[0], RefinedCover::Tag::Plain});
    return refined;
  }
  refined.pieces.reserve(static_cast<std::size_t>(2 * r - 1));
  for (int j = 0; j < r; ++j) {
    const double lo = (j == 0) ? iv[0].lo : iv[static_cast<std::size_t>(j - 1)].hi;
    const double hi = (j == r - 1) ? iv[static_cast<std::size_t>(j)].hi : iv[static_cast<std::size_t>(j + 1)].lo;
    refined.pieces.push_back({{lo, hi}, RefinedCover::Tag::Plain});
    if (j < r - 1)
      refined.pieces.push_back(
          {{iv[static_cast<std::size_t>(j + 1)].lo, iv[static_cast<std::size_t>(j)].hi}, RefinedCover::Tag::Intersection});
  }
  return refined;
}

}  // namespace mgw
