#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mgw/point_cloud.hpp"
#include "mgw/rng.hpp"

namespace mgw {

/// Torus measure family: p and q give the mass of the inner-hole region
/// phi in [5pi/6, 7pi/6] and the outer region phi in [0,pi/6] u [11pi/6, 2pi].
struct TorusParams {
  double a = 0.75;  // major radius
  double b = 0.25;  // minor radius
  double p = 1.0 / 6.0;
  double q = 1.0 / 6.0;

  void validate() const {
    if (!(a > 0.0 && b > 0.0 && b < a)) throw std::invalid_argument("torus radii must satisfy a > b > 0");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("torus parameter p must lie in (0,1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("torus parameter q must lie in (0,1)");
    if (!(p + q < 1.0)) throw std::invalid_argument("torus parameters must satisfy p + q < 1");
  }
};

namespace detail {

/// Piecewise-constant density of the angle phi, integrating to 1 with plateau
/// masses q, 1-p-q (split), p, 1-p-q (split), q over the five breakpoint cells.
struct PhiDistribution {
  // breakpoints 0, pi/6, 5pi/6, 7pi/6, 11pi/6, 2pi
  std::array<double, 6> edges;
  std::array<double, 5> cdf_at_edge;  // cumulative mass up to each interior edge

  explicit PhiDistribution(double p, double q) {
    const double pi = std::numbers::pi;
    edges = {0.0, pi / 6.0, 5.0 * pi / 6.0, 7.0 * pi / 6.0, 11.0 * pi / 6.0, 2.0 * pi};
    const double mid = (1.0 - p - q) / 2.0;  // each of the two middle arcs
    const std::array<double, 5> masses = {q / 2.0, mid, p, mid, q / 2.0};
    double acc = 0.0;
    for (int s = 0; s < 5; ++s) {
      cdf_at_edge[static_cast<std::size_t>(s)] = acc;
      acc += masses[static_cast<std::size_t>(s)];
    }
  }

  double inverse_cdf(double u) const {
    const double pi = std::numbers::pi;
    int s = 4;
    for (int k = 1; k < 5; ++k)
      if (u < cdf_at_edge[static_cast<std::size_t>(k)]) {
        s = k - 1;
        break;
      }
    const double lo_mass = cdf_at_edge[static_cast<std::size_t>(s)];
    const double hi_mass = (s == 4) ? 1.0 : cdf_at_edge[static_cast<std::size_t>(s + 1)];
    const double span = hi_mass - lo_mass;
    const double frac = span > 0.0 ? (u - lo_mass) / span : 0.0;
    double phi = edges[static_cast<std::size_t>(s)] +
                 frac * (edges[static_cast<std::size_t>(s + 1)] - edges[static_cast<std::size_t>(s)]);
    if (phi >= 2.0 * pi) phi = std::nextafter(2.0 * pi, 0.0);
    return phi;
  }
};

}  // namespace detail

inline Eigen::RowVector3d torus_embed(const TorusParams& params, double theta, double phi) {
  const double ring = params.a + params.b * std::cos(theta);
  return {ring * std::cos(phi), ring * std::sin(phi), params.b * std::sin(theta)};
}

/// n i.i.d. draws from m_{p,q}: phi by inverse CDF of the three-plateau
/// density, theta by rejection against the uniform envelope for the density
/// proportional to a + b*cos(theta). Two independent sub-streams keep the phi
/// sequence unaffected by theta rejection counts.
inline PointCloud sample_torus(const TorusParams& params, Eigen::Index n, std::uint64_t seed) {
  params.validate();
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  Rng master(seed);
  Rng phi_rng = master.split(0);
  Rng theta_rng = master.split(1);
  detail::PhiDistribution phi_dist(params.p, params.q);
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXd pts(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = phi_dist.inverse_cdf(phi_rng.next_double());
    double theta;
    for (;;) {
      theta = theta_rng.next_double() * two_pi;
      const double v = theta_rng.next_double() * (params.a + params.b);
      if (v <= params.a + params.b * std::cos(theta)) break;
    }
    pts.row(i) = torus_embed(params, theta, phi);
  }
  return PointCloud(std::move(pts));
}

}  // namespace mgw
