#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgw/clustering.hpp"
#include "mgw/cover.hpp"
#include "mgw/gw.hpp"
#include "mgw/mapper.hpp"
#include "mgw/mds.hpp"
#include "mgw/metric.hpp"
#include "mgw/mm_space.hpp"
#include "mgw/parallel.hpp"
#include "mgw/point_cloud.hpp"
#include "mgw/sampling.hpp"

namespace mgw {

struct MapperParams {
  int r = 25;
  double g = 0.3;
  ClustererSpec clusterer = ClustererSpec::kmeans(3);
  AmbientMetric metric = AmbientMetric::euclidean();
};

inline MetricMeasureSpace build_mapper_mm(const PointCloud& cloud, const FilterValues& filter,
                                          const MapperParams& params) {
  const CoverScheme cover = build_cover(filter, params.r, params.g);
  const MapperGraph mapper = build_mapper(cloud, params.metric, filter, cover, params.clusterer);
  BoundMetric metric(cloud, params.metric);
  return mapper_to_mm(mapper, metric);
}

// ---------------------------------------------------------------------------
// statistics helpers

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty vector");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

namespace detail {

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace detail

/// Spearman rank correlation (ties get average ranks).
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("spearman needs two equal-length series");
  const auto rx = detail::ranks(xs);
  const auto ry = detail::ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Least-squares slope of log(y) vs log(x).
inline double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("slope fit needs two equal-length series");
  double mx = 0, my = 0;
  const double n = static_cast<double>(xs.size());
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// filter sweep

struct FilterSweepReport {
  std::vector<double> ts;
  std::vector<double> sup_norms;
  std::vector<double> gw_values;
};

/// Mapper stability sweep over the filter family f_t(x) = <x, t u + (1-t) v>,
/// comparing each Mapper mm-space against the t=0 one.
inline FilterSweepReport run_filter_sweep(const PointCloud& cloud, const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& v, const std::vector<double>& ts,
                                          const MapperParams& params, const GWOptions& opts,
                                          int threads = 1) {
  if (std::abs(u.norm() - 1.0) > 1e-9 || std::abs(v.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("sweep directions must be unit vectors");
  if (ts.empty() || ts.front() != 0.0 || !std::is_sorted(ts.begin(), ts.end()) || ts.back() > 1.0)
    throw std::invalid_argument("sweep t values must be sorted in [0,1] starting at 0");

  const FilterValues f0 = linear_filter(cloud, v);
  const MetricMeasureSpace base = build_mapper_mm(cloud, f0, params);

  FilterSweepReport report;
  report.ts = ts;
  report.sup_norms.resize(ts.size());
  report.gw_values.resize(ts.size());
  parallel_for(ts.size(), threads, [&](std::size_t k) {
    const double t = ts[k];
    const Eigen::VectorXd dir = t * u + (1.0 - t) * v;
    const FilterValues ft = linear_filter(cloud, dir);
    double sup = 0.0;
    for (std::size_t i = 0; i < ft.size(); ++i)
      sup = std::max(sup, std::abs(ft.values[i] - f0.values[i]));
    report.sup_norms[k] = sup;
    const MetricMeasureSpace mm = (t == 0.0) ? base : build_mapper_mm(cloud, ft, params);
    report.gw_values[k] = gw_hat_p(base, mm, opts).value;
  });
  return report;
}

// ---------------------------------------------------------------------------
// torus measure grid

struct GridReport {
  std::vector<std::string> labels;                 // a..i
  std::vector<std::pair<double, double>> pq;       // per label
  Eigen::MatrixXd gw_matrix;                       // 9x9
  Eigen::MatrixXd mds_coords;                      // 9x2
};

/// The torus measure-family experiment: one sample and Mapper per (p,q) cell,
/// pairwise GW matrix over the cells, classical MDS embedding.
inline GridReport run_torus_grid(const std::vector<double>& grid_values, Eigen::Index n_per_cell,
                                 const MapperParams& params, const GWOptions& opts, std::uint64_t seed,
                                 double torus_a = 0.75, double torus_b = 0.25, int threads = 1) {
  if (grid_values.size() != 3) throw std::invalid_argument("torus grid needs exactly 3 parameter values");
  if (n_per_cell < 1000) throw std::invalid_argument("torus grid needs at least 1000 points per cell");

  GridReport report;
  const int cells = 9;
  std::vector<MetricMeasureSpace> spaces(cells);
  for (int ip = 0; ip < 3; ++ip)
    for (int iq = 0; iq < 3; ++iq) {
      report.labels.push_back(std::string(1, static_cast<char>('a' + 3 * ip + iq)));
      report.pq.emplace_back(grid_values[static_cast<std::size_t>(ip)], grid_values[static_cast<std::size_t>(iq)]);
    }

  Rng master(seed);
  parallel_for(cells, threads, [&](std::size_t cell) {
    TorusParams tp;
    tp.a = torus_a;
    tp.b = torus_b;
    tp.p = report.pq[cell].first;
    tp.q = report.pq[cell].second;
    const PointCloud cloud = sample_torus(tp, n_per_cell, master.split(cell).seed());
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
    e1(0) = 1.0;  // height filter of the torus embedding
    const FilterValues filter = height_filter(cloud, e1);
    spaces[cell] = build_mapper_mm(cloud, filter, params);
  });

  report.gw_matrix = Eigen::MatrixXd::Zero(cells, cells);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < cells; ++i)
    for (int j = i + 1; j < cells; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const double v = gw_hat_p(spaces[static_cast<std::size_t>(i)], spaces[static_cast<std::size_t>(j)], opts).value;
    report.gw_matrix(i, j) = v;
    report.gw_matrix(j, i) = v;
  });

  report.mds_coords = classical_mds(report.gw_matrix, 2);
  return report;
}

// ---------------------------------------------------------------------------
// convergence study

struct ConvergenceReport {
  std::vector<Eigen::Index> ns;
  std::vector<int> r_of_n;
  std::vector<double> gw_medians;
  double slope = 0.0;
  int trials = 0;
  Eigen::Index n_reference = 0;
  int r_reference = 0;
};

inline int convergence_resolution(Eigen::Index n, double c, double alpha, int d = 2) {
  return static_cast<int>(std::lround(c * std::pow(static_cast<double>(n), 1.0 / (d + alpha))));
}

/// Empirical rate study on the torus: GW between a coarse Mapper on n points
/// and a dense-reference Mapper standing in for the Reeb graph.
inline ConvergenceReport run_convergence(double alpha, int p, const std::vector<Eigen::Index>& ns,
                                         int trials, double c, double clusterer_epsilon,
                                         const GWOptions& opts_in, std::uint64_t seed, int threads = 1,
                                         int ref_factor = 4) {
  if (!std::is_sorted(ns.begin(), ns.end()) || ns.empty() ||
      std::adjacent_find(ns.begin(), ns.end()) != ns.end())
    throw std::invalid_argument("convergence sample sizes must be strictly increasing");
  if (trials < 3) throw std::invalid_argument("convergence needs at least 3 trials");

  GWOptions opts = opts_in;
  opts.p = p;

  ConvergenceReport report;
  report.ns = ns;
  report.trials = trials;
  for (Eigen::Index n : ns) report.r_of_n.push_back(convergence_resolution(n, c, alpha));
  if (report.r_of_n.front() < 1) throw std::invalid_argument("convergence resolution fell below 1; raise c");

  TorusParams uniform;  // p=q=1/6 is the normalized volume measure
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1(0) = 1.0;

  report.n_reference = ref_factor * ns.back();
  report.r_reference = ref_factor * report.r_of_n.back();
  Rng master(seed);
  const PointCloud ref_cloud = sample_torus(uniform, report.n_reference, master.split(0xFEED).seed());
  MapperParams ref_params;
  ref_params.r = report.r_reference;
  ref_params.g = 0.3;
  ref_params.clusterer = ClustererSpec::epsilon_graph(clusterer_epsilon);
  const MetricMeasureSpace reference = build_mapper_mm(ref_cloud, height_filter(ref_cloud, e1), ref_params);

  std::vector<double> values(ns.size() * static_cast<std::size_t>(trials));
  parallel_for(values.size(), threads, [&](std::size_t job) {
    const std::size_t ni = job / static_cast<std::size_t>(trials);
    const PointCloud cloud = sample_torus(uniform, ns[ni], master.split(1 + job).seed());
    MapperParams params;
    params.r = report.r_of_n[ni];
    params.g = 0.3;
    params.clusterer = ClustererSpec::epsilon_graph(clusterer_epsilon);
    const MetricMeasureSpace mm = build_mapper_mm(cloud, height_filter(cloud, e1), params);
    values[job] = gw_hat_p(reference, mm, opts).value;
  });

  std::vector<double> ns_d;
  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    std::vector<double> per_n(values.begin() + static_cast<long>(ni * static_cast<std::size_t>(trials)),
                              values.begin() + static_cast<long>((ni + 1) * static_cast<std::size_t>(trials)));
    report.gw_medians.push_back(median(per_n));
    ns_d.push_back(static_cast<double>(ns[ni]));
  }
  report.slope = fit_loglog_slope(ns_d, report.gw_medians);
  return report;
}

// ---------------------------------------------------------------------------
// approximation-error diagnostic

struct DecompositionDiagnostic {
  double A_n = 0.0;
  double band_delta = 0.0;
};

/// Hausdorff distance between two coordinate sets under the Euclidean metric.
inline double hausdorff_points(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() == 0 || B.rows() == 0) throw std::invalid_argument("hausdorff_points needs nonempty sets");
  double sup = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double inf = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < B.rows(); ++j) inf = std::min(inf, (A.row(i) - B.row(j)).norm());
    sup = std::max(sup, inf);
  }
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    double inf = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < A.rows(); ++i) inf = std::min(inf, (A.row(i) - B.row(j)).norm());
    sup = std::max(sup, inf);
  }
  return sup;
}

/// A_n = (1/n sum d_H([x_i], Delta(x_i))^p)^(1/p), with the filter level set
/// [x_i] approximated on a dense reference cloud: the connected component of
/// x_i's nearest reference point inside the band |f_ref - f(x_i)| <= delta
/// under the reference epsilon-graph.
inline DecompositionDiagnostic decomposition_diagnostic(
    const PointCloud& cloud, const FilterValues& filter, const MapperGraph& mapper,
    const PointCloud& ref_cloud, const FilterValues& ref_filter, double band_delta, int p,
    double ref_epsilon) {
  if (!(band_delta > 0.0)) throw std::invalid_argument("band_delta must be positive");
  if (ref_cloud.size() < cloud.size()) throw std::invalid_argument("reference cloud must be denser than the sample");
  const NeighborhoodGraph ref_graph(ref_cloud, ref_epsilon);

  double acc = 0.0;
  const auto n = static_cast<int>(cloud.size());
  for (int i = 0; i < n; ++i) {
    const double fi = filter.values[static_cast<std::size_t>(i)];
    std::vector<int> band;
    for (int y = 0; y < ref_cloud.size(); ++y)
      if (std::abs(ref_filter.values[static_cast<std::size_t>(y)] - fi) <= band_delta) band.push_back(y);
    if (band.empty()) throw std::invalid_argument("empty filter band around sample point " + std::to_string(i));

    // nearest reference point, restricted to the band when necessary
    int nearest = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < ref_cloud.size(); ++y) {
      const double d = (cloud.point(i) - ref_cloud.point(y)).norm();
      if (d < best) {
        best = d;
        nearest = y;
      }
    }
    if (std::abs(ref_filter.values[static_cast<std::size_t>(nearest)] - fi) > band_delta) {
      best = std::numeric_limits<double>::infinity();
      for (int y : band) {
        const double d = (cloud.point(i) - ref_cloud.point(y)).norm();
        if (d < best) {
          best = d;
          nearest = y;
        }
      }
    }

    std::vector<int> component;
    for (const auto& comp : ref_graph.connected_components(band)) {
      if (std::binary_search(comp.begin(), comp.end(), nearest)) {
        component = comp;
        break;
      }
    }

    const auto& rep = mapper.simplices[static_cast<std::size_t>(mapper.simplex_of(i))].representative;
    double dH;
    if (rep.empty()) {
      dH = diameter(cloud, AmbientMetric::euclidean());
    } else {
      Eigen::MatrixXd A(component.size(), ref_cloud.dim());
      for (std::size_t k = 0; k < component.size(); ++k) A.row(static_cast<Eigen::Index>(k)) = ref_cloud.point(component[k]);
      Eigen::MatrixXd B(rep.size(), cloud.dim());
      for (std::size_t k = 0; k < rep.size(); ++k) B.row(static_cast<Eigen::Index>(k)) = cloud.point(rep[k]);
      dH = hausdorff_points(A, B);
    }
    acc += std::pow(dH, p);
  }
  DecompositionDiagnostic diag;
  diag.band_delta = band_delta;
  diag.A_n = std::pow(acc / n, 1.0 / p);
  return diag;
}

}  // namespace mgw
