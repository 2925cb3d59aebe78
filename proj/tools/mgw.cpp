// Command-line front end for the Mapper / Gromov-Wasserstein pipeline.
#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mgw/experiments.hpp"
#include "mgw/gw.hpp"
#include "mgw/io.hpp"
#include "mgw/mapper.hpp"
#include "mgw/mds.hpp"
#include "mgw/mm_space.hpp"
#include "mgw/ot.hpp"
#include "mgw/sampling.hpp"
#include "mgw/svg.hpp"

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + context);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_required(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required config key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed, const json& config) {
  if (cli_seed) return *cli_seed;
  return get_or<std::uint64_t>(config, "seed", 42);
}

mgw::ClustererSpec parse_clusterer(const json& j) {
  reject_unknown_keys(j, {"kind", "epsilon", "k", "max_iter", "seed"}, "clusterer");
  const auto kind = get_required<std::string>(j, "kind");
  if (kind == "epsilon") return mgw::ClustererSpec::epsilon_graph(get_required<double>(j, "epsilon"));
  if (kind == "kmeans")
    return mgw::ClustererSpec::kmeans(get_required<int>(j, "k"), get_or<int>(j, "max_iter", 100),
                                      get_or<std::uint64_t>(j, "seed", 42));
  throw ConfigError("clusterer kind must be 'epsilon' or 'kmeans'");
}

mgw::AmbientMetric parse_metric(const json& j) {
  reject_unknown_keys(j, {"kind", "epsilon"}, "metric");
  const auto kind = get_required<std::string>(j, "kind");
  if (kind == "euclidean") return mgw::AmbientMetric::euclidean();
  if (kind == "geodesic") return mgw::AmbientMetric::graph_geodesic(get_required<double>(j, "epsilon"));
  throw ConfigError("metric kind must be 'euclidean' or 'geodesic'");
}

mgw::GWOptions parse_solver(const json& j, std::uint64_t seed) {
  reject_unknown_keys(j, {"p", "restarts", "max_iter", "tol", "inner", "eps_reg", "seed"}, "solver options");
  mgw::GWOptions o;
  o.p = get_or<int>(j, "p", 2);
  o.restarts = get_or<int>(j, "restarts", 3);
  o.max_iter = get_or<int>(j, "max_iter", 1000);
  o.tol = get_or<double>(j, "tol", 1e-9);
  const auto inner = get_or<std::string>(j, "inner", "exact");
  if (inner == "entropic")
    o.entropic_inner = true;
  else if (inner != "exact")
    throw ConfigError("solver inner must be 'exact' or 'entropic'");
  o.eps_reg = get_or<double>(j, "eps_reg", 5e-2);
  o.seed = get_or<std::uint64_t>(j, "seed", seed);
  o.validate();
  return o;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& key) {
  auto v = get_required<std::vector<double>>(j, key);
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

// --------------------------------------------------------------------------

int cmd_sample(const std::string& config_path, const std::string& out,
               const std::optional<std::uint64_t>& cli_seed) {
  const json cfg = load_config(config_path);
  reject_unknown_keys(cfg, {"a", "b", "p", "q", "n", "seed"}, "sample config");
  mgw::TorusParams tp;
  tp.a = get_or<double>(cfg, "a", 0.75);
  tp.b = get_or<double>(cfg, "b", 0.25);
  tp.p = get_required<double>(cfg, "p");
  tp.q = get_required<double>(cfg, "q");
  const auto n = get_required<std::int64_t>(cfg, "n");
  try {
    tp.validate();
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto cloud = mgw::sample_torus(tp, n, resolve_seed(cli_seed, cfg));
  mgw::save_cloud_csv(out, cloud);
  std::cout << "wrote " << out << " (" << cloud.size() << " points)\n";
  return 0;
}

struct MapperInputs {
  mgw::PointCloud cloud;
  mgw::FilterValues filter;
  mgw::MapperParams params;
};

MapperInputs load_mapper_inputs(const json& cfg, const std::vector<double>& cli_direction,
                                std::uint64_t seed) {
  const auto input = get_required<std::string>(cfg, "input");
  const auto format = get_or<std::string>(cfg, "format", "csv");
  mgw::LoadedCloud loaded = mgw::load_cloud(input, format);

  std::vector<double> direction = cli_direction;
  if (direction.empty() && cfg.contains("direction"))
    direction = get_required<std::vector<double>>(cfg, "direction");

  mgw::FilterValues filter;
  if (!direction.empty()) {
    Eigen::Map<Eigen::VectorXd> dir(direction.data(), static_cast<Eigen::Index>(direction.size()));
    Eigen::VectorXd d = dir;
    const double nrm = d.norm();
    if (nrm == 0.0) throw ConfigError("filter direction must be nonzero");
    filter = mgw::height_filter(loaded.cloud, d / nrm);
  } else if (loaded.filter) {
    filter = *loaded.filter;
  } else {
    throw ConfigError("no filter available: input has no 'f' column and no direction was given");
  }

  MapperInputs in{std::move(loaded.cloud), std::move(filter), {}};
  in.params.r = get_required<int>(cfg, "r");
  in.params.g = get_required<double>(cfg, "g");
  if (cfg.contains("clusterer")) in.params.clusterer = parse_clusterer(cfg.at("clusterer"));
  if (in.params.clusterer.kind == mgw::ClustererKind::KMeans && !cfg.contains("clusterer"))
    in.params.clusterer.seed = seed;
  if (cfg.contains("metric")) in.params.metric = parse_metric(cfg.at("metric"));
  return in;
}

int cmd_mapper(const std::string& config_path, const std::string& out, bool emit_mm,
               const std::vector<double>& cli_direction, const std::optional<std::uint64_t>& cli_seed) {
  const json cfg = load_config(config_path);
  reject_unknown_keys(cfg, {"input", "format", "r", "g", "clusterer", "metric", "direction", "seed"},
                      "mapper config");
  const std::uint64_t seed = resolve_seed(cli_seed, cfg);
  MapperInputs in = load_mapper_inputs(cfg, cli_direction, seed);

  mgw::CoverScheme cover;
  try {
    cover = mgw::build_cover(in.filter, in.params.r, in.params.g);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto mapper = mgw::build_mapper(in.cloud, in.params.metric, in.filter, cover, in.params.clusterer);
  write_text(out, mgw::mapper_to_json(mapper).dump(2) + "\n");
  const std::string edge_path = out + ".edges";
  write_text(edge_path, mgw::mapper_to_edge_list(mapper));
  std::cout << "wrote " << out << " (" << mapper.vertex_count() << " vertices, " << mapper.edge_count()
            << " edges)\n";
  if (emit_mm) {
    mgw::BoundMetric metric(in.cloud, in.params.metric);
    const auto mm = mgw::mapper_to_mm(mapper, metric);
    mgw::save_mm_space(out + ".mm.json", mm, out + ".mm.csv");
    std::cout << "wrote " << out << ".mm.json and " << out << ".mm.csv (" << mm.size() << " simplices)\n";
  }
  return 0;
}

int cmd_gw(const std::string& file_x, const std::string& file_y, const std::string& config_path,
           const std::string& out, const std::optional<std::uint64_t>& cli_seed) {
  json cfg = json::object();
  if (!config_path.empty()) cfg = load_config(config_path);
  reject_unknown_keys(cfg, {"p", "restarts", "max_iter", "tol", "inner", "eps_reg", "seed"}, "gw config");
  const auto opts = parse_solver(cfg, resolve_seed(cli_seed, cfg));

  mgw::MetricMeasureSpace X, Y;
  try {
    X = mgw::load_mm_space(file_x);
    Y = mgw::load_mm_space(file_y);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid mm-space input: ") + e.what());
  }
  const auto result = mgw::gw_hat_p(X, Y, opts);
  std::cout << mgw::format_double(result.value) << "\n";
  if (!out.empty()) mgw::save_matrix_csv(out, result.coupling);
  return 0;
}

int cmd_mds(const std::string& input, const std::string& out, int dim) {
  const Eigen::MatrixXd D = mgw::load_matrix_csv(input);
  Eigen::MatrixXd coords;
  try {
    coords = mgw::classical_mds(D, dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  mgw::save_matrix_csv(out, coords);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_experiment_filter_sweep(const json& cfg, const std::string& out_dir,
                                const std::optional<std::uint64_t>& cli_seed, int threads) {
  reject_unknown_keys(cfg, {"input", "format", "u", "v", "ts", "r", "g", "clusterer", "solver", "seed"},
                      "filter-sweep config");
  const std::uint64_t seed = resolve_seed(cli_seed, cfg);
  const auto loaded = mgw::load_cloud(get_required<std::string>(cfg, "input"),
                                      get_or<std::string>(cfg, "format", "off"));
  Eigen::VectorXd u = parse_vector(cfg, "u");
  Eigen::VectorXd v = parse_vector(cfg, "v");
  const auto ts = get_required<std::vector<double>>(cfg, "ts");
  mgw::MapperParams params;
  params.r = get_required<int>(cfg, "r");
  params.g = get_required<double>(cfg, "g");
  params.clusterer = cfg.contains("clusterer") ? parse_clusterer(cfg.at("clusterer"))
                                               : mgw::ClustererSpec::kmeans(3, 100, seed);
  const auto opts = parse_solver(cfg.contains("solver") ? cfg.at("solver") : json::object(), seed);

  mgw::FilterSweepReport report;
  try {
    report = mgw::run_filter_sweep(loaded.cloud, u, v, ts, params, opts, threads);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::filesystem::create_directories(out_dir);
  json jr;
  jr["ts"] = report.ts;
  jr["sup_norms"] = report.sup_norms;
  jr["gw_values"] = report.gw_values;
  jr["spearman"] = mgw::spearman(report.sup_norms, report.gw_values);
  write_text(out_dir + "/report.json", jr.dump(2) + "\n");
  std::string csv = "t,sup_norm,gw\n";
  for (std::size_t i = 0; i < report.ts.size(); ++i)
    csv += mgw::format_double(report.ts[i]) + "," + mgw::format_double(report.sup_norms[i]) + "," +
           mgw::format_double(report.gw_values[i]) + "\n";
  write_text(out_dir + "/curve.csv", csv);
  mgw::SvgPlot plot;
  plot.add_line(report.sup_norms, report.gw_values);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(report.ts.size()), 2);
  for (std::size_t i = 0; i < report.ts.size(); ++i) {
    pts(static_cast<Eigen::Index>(i), 0) = report.sup_norms[i];
    pts(static_cast<Eigen::Index>(i), 1) = report.gw_values[i];
  }
  plot.add_scatter(pts);
  plot.write(out_dir + "/sweep.svg");
  std::cout << "wrote " << out_dir << "/report.json\n";
  return 0;
}

int cmd_experiment_torus_grid(const json& cfg, const std::string& out_dir,
                              const std::optional<std::uint64_t>& cli_seed, int threads) {
  reject_unknown_keys(cfg, {"grid", "n", "r", "g", "epsilon", "a", "b", "solver", "seed"},
                      "torus-grid config");
  const std::uint64_t seed = resolve_seed(cli_seed, cfg);
  const auto grid = get_or<std::vector<double>>(cfg, "grid", {1.0 / 12, 1.0 / 6, 1.0 / 3});
  mgw::MapperParams params;
  params.r = get_or<int>(cfg, "r", 30);
  params.g = get_or<double>(cfg, "g", 0.3);
  params.clusterer = mgw::ClustererSpec::epsilon_graph(get_or<double>(cfg, "epsilon", 0.1));
  const auto opts = parse_solver(cfg.contains("solver") ? cfg.at("solver") : json::object(), seed);

  mgw::GridReport report;
  try {
    report = mgw::run_torus_grid(grid, get_required<std::int64_t>(cfg, "n"), params, opts, seed,
                                 get_or<double>(cfg, "a", 0.75), get_or<double>(cfg, "b", 0.25), threads);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::filesystem::create_directories(out_dir);
  mgw::save_matrix_csv(out_dir + "/gw_matrix.csv", report.gw_matrix);
  mgw::save_matrix_csv(out_dir + "/mds.csv", report.mds_coords);
  json jr;
  jr["labels"] = report.labels;
  for (const auto& [p, q] : report.pq) jr["pq"].push_back({p, q});
  jr["gw_matrix"] = json::array();
  for (Eigen::Index i = 0; i < report.gw_matrix.rows(); ++i)
    jr["gw_matrix"].push_back(std::vector<double>(report.gw_matrix.row(i).begin(), report.gw_matrix.row(i).end()));
  jr["mds"] = json::array();
  for (Eigen::Index i = 0; i < report.mds_coords.rows(); ++i)
    jr["mds"].push_back(std::vector<double>(report.mds_coords.row(i).begin(), report.mds_coords.row(i).end()));
  write_text(out_dir + "/report.json", jr.dump(2) + "\n");
  mgw::SvgPlot plot;
  plot.add_scatter(report.mds_coords, report.labels);
  plot.write(out_dir + "/mds.svg");
  std::cout << "wrote " << out_dir << "/report.json\n";
  return 0;
}

int cmd_experiment_convergence(const json& cfg, const std::string& out_dir,
                               const std::optional<std::uint64_t>& cli_seed, int threads) {
  reject_unknown_keys(cfg, {"alpha", "p", "ns", "trials", "c", "epsilon", "ref_factor", "solver", "seed"},
                      "convergence config");
  const std::uint64_t seed = resolve_seed(cli_seed, cfg);
  const auto ns_raw = get_required<std::vector<std::int64_t>>(cfg, "ns");
  std::vector<Eigen::Index> ns(ns_raw.begin(), ns_raw.end());
  const int p = get_or<int>(cfg, "p", 2);
  const auto opts = parse_solver(cfg.contains("solver") ? cfg.at("solver") : json::object(), seed);

  mgw::ConvergenceReport report;
  try {
    report = mgw::run_convergence(get_or<double>(cfg, "alpha", 1.0), p, ns, get_or<int>(cfg, "trials", 5),
                                  get_or<double>(cfg, "c", 1.4), get_or<double>(cfg, "epsilon", 0.15), opts,
                                  seed, threads, get_or<int>(cfg, "ref_factor", 4));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::filesystem::create_directories(out_dir);
  std::string csv = "n,r,median_gw\n";
  for (std::size_t i = 0; i < report.ns.size(); ++i)
    csv += std::to_string(report.ns[i]) + "," + std::to_string(report.r_of_n[i]) + "," +
           mgw::format_double(report.gw_medians[i]) + "\n";
  write_text(out_dir + "/curve.csv", csv);
  json jr;
  jr["ns"] = ns_raw;
  jr["r_of_n"] = report.r_of_n;
  jr["gw_medians"] = report.gw_medians;
  jr["slope"] = report.slope;
  jr["trials"] = report.trials;
  jr["n_reference"] = static_cast<std::int64_t>(report.n_reference);
  jr["r_reference"] = report.r_reference;
  write_text(out_dir + "/report.json", jr.dump(2) + "\n");
  mgw::SvgPlot plot;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < report.ns.size(); ++i) {
    lx.push_back(std::log10(static_cast<double>(report.ns[i])));
    ly.push_back(std::log10(std::max(report.gw_medians[i], 1e-300)));
  }
  plot.add_line(lx, ly);
  plot.write(out_dir + "/convergence.svg");
  std::cout << "wrote " << out_dir << "/report.json (slope " << mgw::format_double(report.slope) << ")\n";
  return 0;
}

int cmd_diagnose_an(const std::string& config_path, const std::string& out,
                    const std::vector<double>& cli_direction, const std::optional<std::uint64_t>& cli_seed) {
  const json cfg = load_config(config_path);
  reject_unknown_keys(cfg,
                      {"input", "format", "reference", "ref_format", "r", "g", "clusterer", "metric",
                       "direction", "band_delta", "p", "ref_epsilon", "seed"},
                      "diagnose-an config");
  const std::uint64_t seed = resolve_seed(cli_seed, cfg);
  MapperInputs in = load_mapper_inputs(cfg, cli_direction, seed);
  const auto ref_loaded = mgw::load_cloud(get_required<std::string>(cfg, "reference"),
                                          get_or<std::string>(cfg, "ref_format", "csv"));

  Eigen::VectorXd dir;
  {
    std::vector<double> d = cli_direction;
    if (d.empty()) d = get_required<std::vector<double>>(cfg, "direction");
    dir = Eigen::Map<Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    dir /= dir.norm();
  }
  const auto ref_filter = mgw::height_filter(ref_loaded.cloud, dir);

  const auto cover = mgw::build_cover(in.filter, in.params.r, in.params.g);
  const auto mapper = mgw::build_mapper(in.cloud, in.params.metric, in.filter, cover, in.params.clusterer);

  mgw::DecompositionDiagnostic diag;
  try {
    diag = mgw::decomposition_diagnostic(in.cloud, in.filter, mapper, ref_loaded.cloud, ref_filter,
                                         get_required<double>(cfg, "band_delta"), get_or<int>(cfg, "p", 2),
                                         get_required<double>(cfg, "ref_epsilon"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::cout << "A_n = " << mgw::format_double(diag.A_n) << "\n";
  if (!out.empty()) {
    json jr;
    jr["A_n"] = diag.A_n;
    jr["band_delta"] = diag.band_delta;
    write_text(out, jr.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mapper graphs as metric measure spaces, compared with Gromov-Wasserstein transport"};
  app.require_subcommand(1);

  std::string config_path, out_path, input_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool emit_mm = false;
  bool json_errors = false;
  std::vector<double> direction;
  int mds_dim = 2;
  std::string gw_file_x, gw_file_y;

  app.add_flag("--json-errors", json_errors, "report errors as JSON on stderr");

  auto* sample = app.add_subcommand("sample", "draw a torus sample and write a cloud CSV");
  sample->add_option("--config", config_path, "sampler config JSON")->required();
  sample->add_option("--out", out_path, "output CSV path")->required();
  sample->add_option("--seed", seed, "seed override");

  auto* mapper = app.add_subcommand("mapper", "build a Mapper graph from a cloud");
  mapper->add_option("--config", config_path, "mapper config JSON")->required();
  mapper->add_option("--out", out_path, "output JSON path")->required();
  mapper->add_option("--seed", seed, "seed override");
  mapper->add_option("--direction", direction, "filter direction (overrides config)");
  mapper->add_flag("--emit-mm", emit_mm, "also write the mm-space JSON + matrix CSV");

  auto* gw = app.add_subcommand("gw", "Gromov-Wasserstein distance between two mm-space files");
  gw->add_option("x", gw_file_x, "first mm-space JSON")->required();
  gw->add_option("y", gw_file_y, "second mm-space JSON")->required();
  gw->add_option("--config", config_path, "solver options JSON");
  gw->add_option("--out", out_path, "coupling CSV path");
  gw->add_option("--seed", seed, "seed override");

  auto* experiment = app.add_subcommand("experiment", "run one of the experiment harnesses");
  std::string kind;
  experiment->add_option("kind", kind, "filter-sweep | torus-grid | convergence")->required();
  experiment->add_option("--config", config_path, "experiment config JSON")->required();
  experiment->add_option("--out", out_path, "output directory")->required();
  experiment->add_option("--seed", seed, "seed override");
  experiment->add_option("--threads", threads, "worker threads for independent solves");

  auto* mds = app.add_subcommand("mds", "classical MDS of a distance matrix CSV");
  mds->add_option("--input", input_path, "distance matrix CSV")->required();
  mds->add_option("--out", out_path, "coordinates CSV path")->required();
  mds->add_option("--dim", mds_dim, "embedding dimension");

  auto* diagnose = app.add_subcommand("diagnose-an", "approximation-error diagnostic A_n");
  diagnose->add_option("--config", config_path, "diagnostic config JSON")->required();
  diagnose->add_option("--out", out_path, "output JSON path");
  diagnose->add_option("--seed", seed, "seed override");
  diagnose->add_option("--direction", direction, "filter direction (overrides config)");

  CLI11_PARSE(app, argc, argv);

  auto fail = [&](int code, const std::string& kind_str, const std::string& message) {
    if (json_errors) {
      nlohmann::json je;
      je["error"] = kind_str;
      je["message"] = message;
      std::cerr << je.dump() << "\n";
    } else {
      std::cerr << "error: " << message << "\n";
    }
    return code;
  };

  try {
    if (sample->parsed()) return cmd_sample(config_path, out_path, seed);
    if (mapper->parsed()) return cmd_mapper(config_path, out_path, emit_mm, direction, seed);
    if (gw->parsed()) return cmd_gw(gw_file_x, gw_file_y, config_path, out_path, seed);
    if (mds->parsed()) return cmd_mds(input_path, out_path, mds_dim);
    if (diagnose->parsed()) return cmd_diagnose_an(config_path, out_path, direction, seed);
    if (experiment->parsed()) {
      const json cfg = load_config(config_path);
      if (kind == "filter-sweep") return cmd_experiment_filter_sweep(cfg, out_path, seed, threads);
      if (kind == "torus-grid") return cmd_experiment_torus_grid(cfg, out_path, seed, threads);
      if (kind == "convergence") return cmd_experiment_convergence(cfg, out_path, seed, threads);
      throw ConfigError("unknown experiment kind: " + kind);
    }
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const mgw::ParseError& e) {
    return fail(2, "config", e.what());
  } catch (const std::exception& e) {
    return fail(1, "runtime", e.what());
  }
  return 0;
}
