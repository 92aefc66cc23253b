// Timing harness for the OpenMP kernels against their serial references,
// plus an end-to-end sweep timer for scaling checks.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "mdc/geometry.hpp"
#include "mdc/kernels.hpp"
#include "mdc/mlund.hpp"
#include "mdc/synth.hpp"

using namespace mdc;
namespace k = mdc::kernels;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

void bench_kernels(int n) {
  const PointCloud pc = synth::gen_rings3(n, 1);
  const MatrixXd& pts = pc.points;
  std::printf("kernel benchmarks, n=%d, threads=%d\n", n, omp_get_max_threads());
  std::printf("%-22s %12s %12s %8s\n", "kernel", "serial(ms)", "parallel(ms)",
              "speedup");

  {
    const double ts = time_ms([&] { k::pairwise_sq_dist_serial(pts); });
    const double tp = time_ms([&] { k::pairwise_sq_dist(pts); });
    std::printf("%-22s %12.2f %12.2f %8.2f\n", "pairwise_sq_dist", ts, tp, ts / tp);
  }
  {
    const double ts = time_ms([&] { k::knn_search_serial(pts, 32); });
    const double tp = time_ms([&] { k::knn_search(pts, 32); });
    std::printf("%-22s %12.2f %12.2f %8.2f\n", "knn_search(32)", ts, tp, ts / tp);
  }
  {
    MatrixXd A = MatrixXd::Random(n, n);
    VectorXd x = VectorXd::Random(n), y(n);
    const double ts = time_ms([&] { k::dense_matvec_serial(A, x.data(), y.data()); }, 5);
    const double tp = time_ms([&] { k::dense_matvec(A, x.data(), y.data()); }, 5);
    std::printf("%-22s %12.2f %12.2f %8.2f\n", "dense_matvec", ts, tp, ts / tp);
  }
  {
    GraphConfig cfg;
    cfg.mode = GraphMode::complete;
    cfg.sigma = 0.21;
    cfg.sigma0 = 3.0;
    cfg.kde_neighbors = 32;
    const MarkovModel model = build_markov(pc, cfg, 10);
    const DensityEstimate dens = kde(pc, cfg);
    const MatrixXd coords = embedding_columns(model, 64.0);
    const int arg = density_argmax(dens.p);
    const double ts = time_ms([&] { k::rho_scan_serial(coords, dens.p, arg); });
    const double tp = time_ms([&] { k::rho_scan(coords, dens.p, arg); });
    std::printf("%-22s %12.2f %12.2f %8.2f\n", "rho_scan(t=64)", ts, tp, ts / tp);
  }
}

void bench_sweep(int n, int runs) {
  GraphConfig cfg;
  cfg.mode = GraphMode::complete;
  cfg.sigma = 0.21;
  cfg.sigma0 = 3.0;
  cfg.kde_neighbors = 64;
  SweepConfig sweep;
  std::printf("m-lund sweep wall time on rings, threads=%d\n",
              omp_get_max_threads());
  for (int run = 0; run < runs; ++run) {
    const PointCloud pc = synth::gen_rings3(n, 1);
    const double t0 = now_ms();
    const auto res = mlund(pc, cfg, sweep, 10);
    const double dt = now_ms() - t0;
    std::printf("n=%d run=%d wall=%.1f ms grid=%zu optimal_k=%d\n", n, run, dt,
                res.times.size(), res.has_optimal() ? res.K[res.optimal_index] : 0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel and sweep benchmarks"};
  int n = 2000;
  int runs = 3;
  bool sweep = false;
  app.add_option("--n", n, "point count")->capture_default_str();
  app.add_option("--runs", runs, "sweep repetitions")->capture_default_str();
  app.add_flag("--sweep", sweep, "time the full m-lund sweep instead");
  CLI11_PARSE(app, argc, argv);
  if (sweep)
    bench_sweep(n, runs);
  else
    bench_kernels(n);
  return 0;
}
