#include "mdc/lund.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdc/error.hpp"
#include "mdc/kernels.hpp"

namespace mdc {

KEstimate estimate_K(const VectorXd& score) {
  const int n = static_cast<int>(score.size());
  if (n < 2) fail(ErrorCode::usage, "need at least two points to estimate K");

  KEstimate est;
  est.order.resize(n);
  std::iota(est.order.begin(), est.order.end(), 0);
  std::sort(est.order.begin(), est.order.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });

  if (score[est.order.front()] == score[est.order.back()]) {
    est.K = 1;
    est.all_scores_equal = true;
    return est;
  }

  int best_k = 1;
  double best_ratio = -1.0;
  for (int k = 1; k <= n - 1; ++k) {
    const double hi = score[est.order[k - 1]];
    const double lo = std::max(score[est.order[k]], 1e-300);
    const double ratio = hi / lo;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_k = k;
    }
  }
  est.K = best_k;
  return est;
}

LundResult lund_cluster(const MarkovModel& model, const DensityEstimate& density,
                        double t) {
  const int n = model.n;
  if (density.p.size() != n) fail(ErrorCode::usage, "density and model sizes differ");

  const MatrixXd coords = embedding_columns(model, t);
  const int p_max = density_argmax(density.p);
  const VectorXd rho = kernels::rho_scan(coords, density.p, p_max);
  const VectorXd score = density.p.cwiseProduct(rho);

  const KEstimate est = estimate_K(score);
  const int K = est.K;

  LundResult out;
  out.all_scores_equal = est.all_scores_equal;
  out.clustering.K = K;
  out.clustering.labels = VectorXi::Zero(n);
  out.clustering.modes.assign(est.order.begin(), est.order.begin() + K);
  for (int k = 0; k < K; ++k)
    out.clustering.labels[est.order[k]] = k + 1;  // modes are frozen

  // Non-modal points in non-increasing density order, each taking the label
  // of its diffusion-nearest labeled point of no smaller density.
  std::vector<int> by_density(n);
  std::iota(by_density.begin(), by_density.end(), 0);
  std::sort(by_density.begin(), by_density.end(), [&](int a, int b) {
    if (density.p[a] != density.p[b]) return density.p[a] > density.p[b];
    return a < b;
  });

  std::vector<int> c2_order, c2_rank;
  kernels::coordinate_order(coords, c2_order, c2_rank);
  std::vector<char> labeled(n, 0);
  for (int k = 0; k < K; ++k) labeled[est.order[k]] = 1;

  for (int x : by_density) {
    if (out.clustering.labels[x] != 0) continue;
    auto [best, d] = kernels::nearest_admissible(
        coords, c2_order, c2_rank, x, [&](int y) {
          return labeled[y] && density.p[y] >= density.p[x];
        });
    if (best < 0) {
      // Only reachable when the global density maximizer is not a mode:
      // fall back to the nearest labeled point regardless of density.
      std::tie(best, d) = kernels::nearest_admissible(
          coords, c2_order, c2_rank, x, [&](int y) { return labeled[y] != 0; });
    }
    out.clustering.labels[x] = out.clustering.labels[best];
    labeled[x] = 1;
  }
  return out;
}

}  // namespace mdc
