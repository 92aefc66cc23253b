#include "mdc/geometry.hpp"

#include <cmath>

#include "mdc/error.hpp"
#include "mdc/kernels.hpp"

namespace mdc {

DensityEstimate kde(const PointCloud& data, const GraphConfig& cfg) {
  const int n = data.n();
  const int N = cfg.kde_neighbors;
  if (N < 1 || N >= n) fail(ErrorCode::usage, "kde neighbor count must be in [1, n)");
  if (cfg.sigma0 <= 0.0) fail(ErrorCode::usage, "sigma0 must be positive");

  auto knn = kernels::knn_search(data.points, N);
  const double inv_s2 = 1.0 / (cfg.sigma0 * cfg.sigma0);
  VectorXd p(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < N; ++c) s += std::exp(-knn.sq_dist(i, c) * inv_s2);
    p[i] = s;
  }
  p /= p.sum();

  DensityEstimate d;
  d.p = std::move(p);
  d.bandwidth = cfg.sigma0;
  d.neighbor_count = N;
  return d;
}

int density_argmax(const VectorXd& p) {
  int arg = 0;
  for (int i = 1; i < p.size(); ++i)
    if (p[i] > p[arg]) arg = i;
  return arg;
}

DiffusionEmbedding diffusion_map(const MarkovModel& model, double t) {
  if (t < 0.0) fail(ErrorCode::usage, "diffusion time must be nonnegative");
  const int n = model.n;
  const int m = model.spectrum.m();
  DiffusionEmbedding emb;
  emb.t = t;
  emb.coords.resize(n, m);
  for (int j = 0; j < m; ++j) {
    const double lam = std::abs(model.spectrum.values[j]);
    const double w = t == 0.0 ? 1.0 : std::pow(lam, t);
    emb.coords.col(j) = w * model.spectrum.vectors.col(j);
  }
  return emb;
}

double diffusion_distance(const MarkovModel& model, double t, int i, int j) {
  if (t < 0.0) fail(ErrorCode::usage, "diffusion time must be nonnegative");
  double s = 0.0;
  for (int c = 0; c < model.spectrum.m(); ++c) {
    const double lam = std::abs(model.spectrum.values[c]);
    const double w = t == 0.0 ? 1.0 : std::pow(lam, t);
    const double diff =
        w * (model.spectrum.vectors(i, c) - model.spectrum.vectors(j, c));
    s += diff * diff;
  }
  return std::sqrt(s);
}

VectorXd rho_t(const MarkovModel& model, const DensityEstimate& density,
               double t) {
  if (density.p.size() != model.n)
    fail(ErrorCode::usage, "density and model sizes differ");
  const MatrixXd coords_cols = embedding_columns(model, t);
  return kernels::rho_scan(coords_cols, density.p, density_argmax(density.p));
}

MatrixXd embedding_columns(const MarkovModel& model, double t) {
  if (t < 0.0) fail(ErrorCode::usage, "diffusion time must be nonnegative");
  const int m = model.spectrum.m();
  MatrixXd coords = model.spectrum.vectors.transpose();
  for (int j = 0; j < m; ++j) {
    const double lam = std::abs(model.spectrum.values[j]);
    const double w = t == 0.0 ? 1.0 : std::pow(lam, t);
    coords.row(j) *= w;
  }
  return coords;
}

VectorXd lund_score(const DensityEstimate& density, const VectorXd& rho) {
  return density.p.cwiseProduct(rho);
}

}  // namespace mdc
