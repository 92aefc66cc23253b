#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mdc/baselines.hpp"
#include "mdc/error.hpp"
#include "mdc/geometry.hpp"
#include "mdc/io.hpp"
#include "mdc/lund.hpp"
#include "mdc/markov.hpp"
#include "mdc/meld.hpp"
#include "mdc/metrics.hpp"
#include "mdc/mlund.hpp"
#include "mdc/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mdc;

namespace {

struct GraphFlags {
  double sigma = 0.0;
  double sigma0 = 1.0;
  int knn = 0;        // 0 means not set
  bool complete = false;
  int kde_nn = 25;
  int eigenpairs = 10;

  GraphConfig to_config() const {
    GraphConfig cfg;
    cfg.sigma = sigma;
    cfg.sigma0 = sigma0;
    cfg.kde_neighbors = kde_nn;
    if (complete && knn > 0)
      fail(ErrorCode::usage, "--knn and --complete are mutually exclusive");
    if (!complete && knn <= 0)
      fail(ErrorCode::usage, "choose a graph: --knn N or --complete");
    cfg.mode = complete ? GraphMode::complete : GraphMode::knn;
    cfg.knn_neighbors = knn;
    return cfg;
  }
};

void add_graph_flags(CLI::App* cmd, GraphFlags& g, bool with_kde = true) {
  cmd->add_option("--sigma", g.sigma, "diffusion scale")->required();
  cmd->add_option("--knn", g.knn, "KNN graph neighbor count");
  cmd->add_flag("--complete", g.complete, "complete kernel graph");
  if (with_kde) {
    cmd->add_option("--sigma0", g.sigma0, "KDE bandwidth")->required();
    cmd->add_option("--kde-nn", g.kde_nn, "KDE neighbor count")->required();
  }
  cmd->add_option("--eigenpairs", g.eigenpairs, "spectrum truncation")->capture_default_str();
}

PointCloud load_points(const std::string& path) {
  PointCloud pc;
  pc.points = io::read_points_csv(path);
  if (pc.n() < 2) fail(ErrorCode::usage, "need at least two points");
  return pc;
}

std::string sidecar_path(const std::string& out) { return out + ".json"; }

std::string report_stem(const std::string& out) {
  fs::path p(out);
  if (p.extension() == ".json") return (p.parent_path() / p.stem()).string();
  return out;
}

json clustering_sidecar(const Clustering& c, const VectorXd& score) {
  std::vector<double> curve(score.data(), score.data() + score.size());
  std::sort(curve.begin(), curve.end(), std::greater<double>());
  json j;
  j["k"] = c.K;
  j["mode_indices"] = c.modes;
  j["score_curve"] = curve;
  return j;
}

// -------------------------------------------------------------- datagen ----

int run_datagen(const std::string& shape, int n, uint64_t seed,
                const std::vector<double>& deltas, const std::string& out) {
  PointCloud pc;
  if (shape == "gaussians") {
    pc = synth::gen_gaussians4(n > 0 ? n : synth::kGaussians4DefaultN, seed);
  } else if (shape == "rings") {
    pc = synth::gen_rings3(n > 0 ? n : synth::kRingsDefaultN, seed);
  } else if (shape == "bottleneck") {
    pc = synth::gen_bottlenecks(n > 0 ? n : synth::kBottleneckDefaultN, seed);
  } else if (shape == "trapezoid") {
    if (deltas.size() != 3)
      fail(ErrorCode::usage, "trapezoid needs --deltas d1,d2,d3");
    pc = synth::gen_trapezoid(n > 0 ? n : 400, {deltas[0], deltas[1], deltas[2]},
                              seed);
  } else {
    fail(ErrorCode::usage, "unknown shape '" + shape + "'");
  }
  io::write_points_csv(out, pc.points);
  io::write_labels_csv(out + ".labels.csv", *pc.truth_labels);
  std::cout << "wrote " << pc.n() << " points to " << out << "\n";
  return 0;
}

// -------------------------------------------------------------- cluster ----

int run_cluster(const std::string& input, double t, const GraphFlags& gf,
                const std::string& out) {
  if (t < 0) fail(ErrorCode::usage, "t must be nonnegative");
  const PointCloud pc = load_points(input);
  const GraphConfig cfg = gf.to_config();
  const MarkovModel model = build_markov(pc, cfg, gf.eigenpairs);
  const DensityEstimate density = kde(pc, cfg);
  const LundResult res = lund_cluster(model, density, t);
  const VectorXd rho = rho_t(model, density, t);
  const VectorXd score = lund_score(density, rho);

  if (res.clustering.labels.size() != pc.n())
    fail(ErrorCode::usage, "internal: label count mismatch");
  io::write_labels_csv(out, res.clustering.labels);
  json j = clustering_sidecar(res.clustering, score);
  j["t"] = t;
  j["all_scores_equal"] = res.all_scores_equal;
  io::atomic_write(sidecar_path(out), j.dump(2) + "\n");
  std::cout << "k=" << res.clustering.K << " labels=" << out << "\n";
  return 0;
}

// ---------------------------------------------------------------- mlund ----

int run_mlund(const std::string& input, const GraphFlags& gf,
              const SweepConfig& sweep, const std::string& out) {
  const PointCloud pc = load_points(input);
  const GraphConfig cfg = gf.to_config();
  const MlundResult res = mlund(pc, cfg, sweep, gf.eigenpairs);

  const std::string stem = report_stem(out);
  std::vector<std::string> labels_paths;
  for (size_t i = 0; i < res.times.size(); ++i) {
    const std::string path = stem + ".t" + std::to_string(i) + ".labels.csv";
    io::write_labels_csv(path, res.clusterings[i].labels);
    labels_paths.push_back(path);
  }

  json j;
  j["t"] = res.T;
  j["times"] = res.times;
  j["k_t"] = res.K;
  j["j"] = res.J;
  json tv = json::object();
  for (size_t a = 0; a < res.J.size(); ++a)
    tv[io::format_double(res.times[res.J[a]])] = res.total_vi[a];
  j["total_vi"] = tv;
  if (res.has_optimal()) {
    json opt;
    opt["time"] = res.times[res.optimal_index];
    opt["k"] = res.K[res.optimal_index];
    opt["labels_path"] = labels_paths[res.optimal_index];
    j["optimal"] = opt;
  } else {
    j["optimal"] = nullptr;
  }
  j["labels_paths"] = labels_paths;
  j["lambda2_abs"] = res.lambda2_abs;
  j["pi_min"] = res.pi_min;
  // schema sanity before anything lands on disk
  if (j["times"].size() != j["k_t"].size() ||
      j["labels_paths"].size() != j["times"].size() ||
      j["total_vi"].size() != j["j"].size())
    fail(ErrorCode::usage, "internal: report arrays misaligned");
  io::atomic_write(out, j.dump(2) + "\n");

  if (res.has_optimal())
    std::cout << "optimal k=" << res.K[res.optimal_index]
              << " at t=" << io::format_double(res.times[res.optimal_index])
              << "\n";
  else
    std::cout << "no nontrivial clustering found\n";
  return 0;
}

// ----------------------------------------------------------------- meld ----

std::vector<double> parse_epsilon_range(const std::string& spec, int n) {
  // "lo:hi:count" log-spaced; empty uses the documented default
  double lo = 1e-8;
  double hi = 0.99 / std::sqrt(static_cast<double>(n));
  int count = 200;
  if (!spec.empty()) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
      fail(ErrorCode::usage, "--epsilons wants lo:hi:count");
    try {
      lo = std::stod(spec.substr(0, c1));
      hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
      count = std::stoi(spec.substr(c2 + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::usage, "--epsilons wants lo:hi:count");
    }
  }
  if (!(lo > 0) || !(hi > lo) || count < 1)
    fail(ErrorCode::usage, "--epsilons range is degenerate");
  std::vector<double> eps(count);
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    eps[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  return eps;
}

std::vector<long long> parse_times(const std::string& spec) {
  std::vector<long long> times;
  if (spec.empty()) {
    for (long long t = 1; t <= 1024; t *= 2) times.push_back(t);
    return times;
  }
  size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const std::string tok =
        spec.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    if (!tok.empty()) {
      try {
        times.push_back(std::stoll(tok));
      } catch (const std::exception&) {
        fail(ErrorCode::usage, "--times wants a comma list of integers");
      }
      if (times.back() < 0) fail(ErrorCode::usage, "times must be nonnegative");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (times.empty()) fail(ErrorCode::usage, "--times is empty");
  return times;
}

Clustering clustering_from_labels(const VectorXi& raw) {
  Clustering c;
  c.labels.resize(raw.size());
  std::vector<int> ids;
  std::vector<int> firsts;
  for (int i = 0; i < raw.size(); ++i) {
    int id = -1;
    for (size_t k = 0; k < ids.size(); ++k)
      if (ids[k] == raw[i]) {
        id = static_cast<int>(k);
        break;
      }
    if (id < 0) {
      id = static_cast<int>(ids.size());
      ids.push_back(raw[i]);
      firsts.push_back(i);
    }
    c.labels[i] = id + 1;
  }
  c.K = static_cast<int>(ids.size());
  c.modes = std::move(firsts);
  return c;
}

int run_meld(const std::string& input, const std::vector<std::string>& label_files,
             const std::string& eps_spec, const std::string& times_spec,
             GraphFlags gf, const std::string& out) {
  const PointCloud pc = load_points(input);
  const int n = pc.n();
  // full spectrum at desk scale keeps measured distances honest
  gf.eigenpairs = n <= 1000 ? n : std::max(10, gf.eigenpairs);
  const GraphConfig cfg = gf.to_config();
  const MarkovModel model = build_markov(pc, cfg, gf.eigenpairs);
  const MatrixXd P = model.P_dense();

  const std::vector<double> epsilons = parse_epsilon_range(eps_spec, n);
  const std::vector<long long> times = parse_times(times_spec);
  if (label_files.empty()) fail(ErrorCode::usage, "meld wants at least one --labels file");

  json report;
  report["n"] = n;
  report["epsilon_grid"] = epsilons;
  json entries = json::array();

  std::vector<std::vector<EpsilonInterval>> curves;
  for (const auto& lf : label_files) {
    const VectorXi raw = io::read_labels_csv(lf);
    if (raw.size() != n)
      fail(ErrorCode::usage, lf + ": label count does not match point count");
    const Clustering clus = clustering_from_labels(raw);
    if (clus.K < 2)
      fail(ErrorCode::invalid_clustering, lf + ": need at least two clusters");

    const StochasticComplement sc = stochastic_complement(P, clus);
    const GeometricConstants g = geometric_constants(P, sc);

    json entry;
    entry["labels_path"] = lf;
    entry["k"] = clus.K;
    json constants;
    constants["lambda_next"] = g.lambda_next;
    constants["delta"] = g.delta;
    constants["kappa"] = g.kappa_finite ? json(g.kappa) : json(nullptr);
    constants["non_primitive"] = g.non_primitive;
    constants["delta_identity_gap"] = g.delta_identity_gap;
    entry["constants"] = constants;

    std::vector<EpsilonInterval> curve;
    json curve_json = json::array();
    for (double e : epsilons) {
      const EpsilonInterval iv = epsilon_interval(g, e);
      curve.push_back(iv);
      json c;
      c["epsilon"] = e;
      c["lower"] = iv.lower;
      c["upper"] = std::isinf(iv.upper) ? json(nullptr) : json(iv.upper);
      c["empty"] = iv.empty;
      curve_json.push_back(c);
    }
    entry["interval_curve"] = curve_json;
    curves.push_back(std::move(curve));

    MatrixXd Pp(n, n);
    for (int i = 0; i < n; ++i)
      for (int j2 = 0; j2 < n; ++j2) Pp(i, j2) = P(sc.perm[i], sc.perm[j2]);

    json gammas = json::array();
    json meyer = json::array();
    json bounds = json::array();
    const auto meyer_recs = verify_meyer(model, clus, times);
    for (size_t ti = 0; ti < times.size(); ++ti) {
      const long long t = times[ti];
      json grec;
      grec["t"] = t;
      grec["value"] = gamma_t(Pp, sc.S_infinity, t);
      gammas.push_back(grec);

      json mrec;
      mrec["t"] = t;
      mrec["lhs"] = meyer_recs[ti].lhs;
      mrec["rhs"] = meyer_recs[ti].rhs;
      mrec["holds"] = meyer_recs[ti].holds;
      meyer.push_back(mrec);

      const BoundsRecord b = diffusion_bounds(model, clus, t);
      json brec;
      brec["t"] = t;
      brec["d_in"] = b.d_in;
      brec["d_btw"] = b.d_btw;
      brec["in_upper"] = b.in_upper;
      brec["btw_lower"] = b.btw_lower;
      brec["gamma"] = b.gamma;
      bounds.push_back(brec);
    }
    entry["gamma"] = gammas;
    entry["meyer"] = meyer;
    entry["bounds"] = bounds;
    entries.push_back(std::move(entry));
  }
  report["clusterings"] = entries;

  json overlaps = json::array();
  for (size_t a = 0; a < curves.size(); ++a)
    for (size_t b = a + 1; b < curves.size(); ++b) {
      bool any = false;
      for (size_t e = 0; e < epsilons.size() && !any; ++e) {
        const auto& ia = curves[a][e];
        const auto& ib = curves[b][e];
        if (ia.empty || ib.empty) continue;
        any = std::max(ia.lower, ib.lower) <= std::min(ia.upper, ib.upper);
      }
      json o;
      o["a"] = a;
      o["b"] = b;
      o["overlap"] = any;
      overlaps.push_back(o);
    }
  report["interval_overlaps"] = overlaps;

  io::atomic_write(out, report.dump(2) + "\n");
  std::cout << "meld report for " << label_files.size() << " clustering(s) -> "
            << out << "\n";
  return 0;
}

// -------------------------------------------------------------- compare ----

struct CompareRow {
  std::string algorithm;
  std::string mode;
  int k = 0;
  std::optional<double> nmi;
};

int run_compare(const std::string& input, const std::string& truth_path,
                const std::vector<std::string>& algorithms, int fixed_k,
                GraphFlags gf, const SweepConfig& sweep, uint64_t seed,
                const std::string& out) {
  const PointCloud pc = load_points(input);
  const VectorXi truth = io::read_labels_csv(truth_path);
  if (truth.size() != pc.n())
    fail(ErrorCode::usage, "truth label count does not match point count");
  const bool fixed_mode = fixed_k > 0;
  if (fixed_mode && fixed_k < 2) fail(ErrorCode::usage, "--fixed-k wants K >= 2");

  if (fixed_mode) gf.eigenpairs = std::max(gf.eigenpairs, fixed_k + 1);
  const GraphConfig cfg = gf.to_config();
  const MarkovModel model = build_markov(pc, cfg, gf.eigenpairs);
  const DensityEstimate density = kde(pc, cfg);

  std::vector<CompareRow> rows;
  const std::string mode_name = fixed_mode ? "fixed-k" : "multiscale";

  for (const std::string& alg : algorithms) {
    CompareRow row;
    row.algorithm = alg;
    row.mode = mode_name;
    if (alg == "mlund") {
      const MlundResult res = mlund_over_model(model, density, sweep);
      int pick = -1;
      if (fixed_mode) {
        // the fixed-K clustering with the smallest total VI, later time on ties
        for (size_t a = 0; a < res.J.size(); ++a) {
          const int idx = res.J[a];
          if (res.K[idx] != fixed_k) continue;
          if (pick < 0) pick = static_cast<int>(a);
          else if (res.total_vi[a] <= res.total_vi[pick]) pick = static_cast<int>(a);
        }
        if (pick >= 0) pick = res.J[pick];
      } else if (res.has_optimal()) {
        pick = res.optimal_index;
      }
      if (pick >= 0) {
        row.k = res.K[pick];
        row.nmi = nmi(res.clusterings[pick].labels, truth);
      }
    } else if (alg == "sc") {
      if (!fixed_mode)
        fail(ErrorCode::usage, "sc needs --fixed-k (no multiscale variant)");
      const Clustering c = spectral_cluster(model, fixed_k, seed);
      row.k = c.K;
      row.nmi = nmi(c.labels, truth);
    } else if (alg == "kmeans") {
      if (!fixed_mode)
        fail(ErrorCode::usage, "kmeans needs --fixed-k (no multiscale variant)");
      const Clustering c = kmeans(pc.points, fixed_k, seed);
      row.k = c.K;
      row.nmi = nmi(c.labels, truth);
    } else if (alg == "hsc") {
      const int T = compute_T(model.lambda2_abs(), model.pi_min, sweep);
      std::vector<double> grid;
      double t = 1.0;
      for (int j = 0; j <= T; ++j) {
        grid.push_back(t);
        t *= sweep.beta;
      }
      const auto extracted = hsc_over_times(model, grid, seed);
      int pick = -1;
      if (fixed_mode) {
        for (size_t i = 0; i < extracted.size(); ++i)
          if (extracted[i].clustering.K == fixed_k) {
            pick = static_cast<int>(i);
            break;
          }
      } else {
        // total-VI minimizer among the nontrivial extracted clusterings
        std::vector<int> live;
        for (size_t i = 0; i < extracted.size(); ++i) {
          const int K = extracted[i].clustering.K;
          if (K >= 2 && K < pc.n() / 2.0) live.push_back(static_cast<int>(i));
        }
        double best = std::numeric_limits<double>::infinity();
        for (int i : live) {
          double tot = 0.0;
          for (int j2 : live)
            tot += vi(extracted[i].clustering, extracted[j2].clustering);
          if (tot <= best) {
            best = tot;
            pick = i;
          }
        }
      }
      if (pick >= 0) {
        row.k = extracted[pick].clustering.K;
        row.nmi = nmi(extracted[pick].clustering.labels, truth);
      }
    } else if (alg == "slc") {
      const Dendrogram dendro = slc(pc.points);
      const Clustering c = fixed_mode ? slc_cut(dendro, fixed_k) : slc_select(dendro);
      row.k = c.K;
      row.nmi = nmi(c.labels, truth);
    } else {
      fail(ErrorCode::usage, "unknown algorithm '" + alg + "'");
    }
    rows.push_back(std::move(row));
  }

  std::string csv = "algorithm,mode,k,nmi\n";
  for (const auto& row : rows) {
    csv += row.algorithm + "," + row.mode + "," + std::to_string(row.k) + ",";
    csv += row.nmi ? io::format_double(*row.nmi) : "nan";
    csv += "\n";
  }
  io::atomic_write(out, csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiscale diffusion clustering"};
  app.require_subcommand(1);

  // datagen
  auto* datagen = app.add_subcommand("datagen", "generate a synthetic dataset");
  std::string shape, dg_out;
  int dg_n = 0;
  uint64_t dg_seed = 0;
  std::vector<double> dg_deltas{1.0, 1.35, 1.9};
  datagen->add_option("--shape", shape, "gaussians|rings|bottleneck|trapezoid")
      ->required();
  datagen->add_option("--n", dg_n, "point count (0 = shape default)");
  datagen->add_option("--seed", dg_seed, "generator seed")->capture_default_str();
  datagen->add_option("--deltas", dg_deltas, "trapezoid gaps d1 d2 d3")->expected(3);
  datagen->add_option("--out", dg_out, "points CSV path")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "LUND at a fixed diffusion time");
  std::string cl_in, cl_out;
  double cl_t = 0.0;
  GraphFlags cl_gf;
  cluster->add_option("--input", cl_in, "points CSV")->required();
  cluster->add_option("--t", cl_t, "diffusion time")->required();
  add_graph_flags(cluster, cl_gf);
  cluster->add_option("--out", cl_out, "labels CSV path")->required();

  // mlund
  auto* ml = app.add_subcommand("mlund", "multiscale LUND sweep");
  std::string ml_in, ml_out;
  GraphFlags ml_gf;
  SweepConfig ml_sweep;
  ml->add_option("--input", ml_in, "points CSV")->required();
  add_graph_flags(ml, ml_gf);
  ml->add_option("--beta", ml_sweep.beta, "exponential sampling rate")->capture_default_str();
  ml->add_option("--tau", ml_sweep.tau, "stationarity threshold")->capture_default_str();
  ml->add_option("--out", ml_out, "JSON report path")->required();

  // meld
  auto* meld_cmd = app.add_subcommand("meld", "geometric analysis of clusterings");
  std::string me_in, me_out, me_eps, me_times;
  std::vector<std::string> me_labels;
  GraphFlags me_gf;
  meld_cmd->add_option("--input", me_in, "points CSV")->required();
  meld_cmd->add_option("--labels", me_labels, "labels CSV (repeatable)")
      ->required()
      ->take_all();
  meld_cmd->add_option("--epsilons", me_eps, "lo:hi:count log-spaced");
  meld_cmd->add_option("--times", me_times, "comma list of integer times");
  add_graph_flags(meld_cmd, me_gf, false);
  meld_cmd->add_option("--out", me_out, "JSON report path")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "benchmark algorithms against truth");
  std::string cp_in, cp_truth, cp_out;
  std::vector<std::string> cp_algs;
  int cp_fixed_k = 0;
  uint64_t cp_seed = 0;
  GraphFlags cp_gf;
  SweepConfig cp_sweep;
  cmp->add_option("--input", cp_in, "points CSV")->required();
  cmp->add_option("--truth", cp_truth, "ground-truth labels CSV")->required();
  cmp->add_option("--algorithms", cp_algs, "mlund|sc|hsc|slc|kmeans")
      ->required()
      ->delimiter(',');
  cmp->add_option("--fixed-k", cp_fixed_k, "fixed cluster count mode");
  add_graph_flags(cmp, cp_gf);
  cmp->add_option("--beta", cp_sweep.beta, "exponential sampling rate")->capture_default_str();
  cmp->add_option("--tau", cp_sweep.tau, "stationarity threshold")->capture_default_str();
  cmp->add_option("--seed", cp_seed, "seed for randomized baselines")->capture_default_str();
  cmp->add_option("--out", cp_out, "CSV table path")->required();

  try {
    app.parse(argc, argv);
    if (*datagen) return run_datagen(shape, dg_n, dg_seed, dg_deltas, dg_out);
    if (*cluster) return run_cluster(cl_in, cl_t, cl_gf, cl_out);
    if (*ml) return run_mlund(ml_in, ml_gf, ml_sweep, ml_out);
    if (*meld_cmd)
      return run_meld(me_in, me_labels, me_eps, me_times, me_gf, me_out);
    if (*cmp)
      return run_compare(cp_in, cp_truth, cp_algs, cp_fixed_k, cp_gf, cp_sweep,
                         cp_seed, cp_out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "E_USAGE: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "E_INTERNAL: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
