#include "mdc/mlund.hpp"

#include <cmath>

#include "mdc/error.hpp"
#include "mdc/metrics.hpp"

namespace mdc {

int compute_T(double lambda2_abs, double pi_min, const SweepConfig& cfg) {
  if (cfg.beta <= 1.0) fail(ErrorCode::usage, "beta must exceed 1");
  if (cfg.tau <= 0.0 || cfg.tau >= 1.0) fail(ErrorCode::usage, "tau must be in (0,1)");
  if (lambda2_abs >= 1.0 - 1e-12)
    fail(ErrorCode::lambda2_unity,
         "|lambda_2| is numerically 1; the graph is effectively disconnected");
  if (lambda2_abs <= 0.0) return 0;

  const double inner = std::log(cfg.tau * pi_min / 2.0) / std::log(lambda2_abs);
  if (inner <= 1.0) return 0;
  const double x = std::log(inner) / std::log(cfg.beta);
  // ceil with a nudge so exact integer arguments are not pushed up by round-off
  const double r = std::round(x);
  const int T = std::abs(x - r) < 1e-9 ? static_cast<int>(r)
                                       : static_cast<int>(std::ceil(x));
  return std::max(0, T);
}

std::vector<double> time_grid(int T, double beta) {
  std::vector<double> times;
  times.reserve(T + 2);
  times.push_back(0.0);
  double t = 1.0;
  for (int j = 0; j <= T; ++j) {
    times.push_back(t);
    t *= beta;
  }
  return times;
}

std::map<double, double> total_vi_table(const std::vector<Clustering>& clusterings,
                                        const std::vector<double>& times) {
  if (clusterings.size() != times.size())
    fail(ErrorCode::usage, "clusterings/times size mismatch");
  const int k = static_cast<int>(clusterings.size());
  MatrixXd d = MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      d(i, j) = d(j, i) = vi(clusterings[i], clusterings[j]);
  std::map<double, double> table;
  for (int i = 0; i < k; ++i) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += d(i, j);
    table[times[i]] = s;
  }
  return table;
}

MlundResult mlund_over_model(const MarkovModel& model,
                             const DensityEstimate& density,
                             const SweepConfig& cfg) {
  MlundResult r;
  r.lambda2_abs = model.lambda2_abs();
  r.pi_min = model.pi_min;
  r.T = compute_T(r.lambda2_abs, r.pi_min, cfg);
  r.times = time_grid(r.T, cfg.beta);

  const int n = model.n;
  for (double t : r.times) {
    LundResult lr = lund_cluster(model, density, t);
    r.K.push_back(lr.clustering.K);
    r.score_flat.push_back(lr.all_scores_equal ? 1 : 0);
    r.clusterings.push_back(std::move(lr.clustering));
  }

  for (int i = 0; i < static_cast<int>(r.times.size()); ++i)
    if (r.K[i] >= 2 && r.K[i] < n / 2.0) r.J.push_back(i);

  if (r.J.empty()) return r;  // result carries all clusterings, no optimal

  const int jn = static_cast<int>(r.J.size());
  MatrixXd d = MatrixXd::Zero(jn, jn);
  for (int a = 0; a < jn; ++a)
    for (int b = a + 1; b < jn; ++b)
      d(a, b) = d(b, a) = vi(r.clusterings[r.J[a]], r.clusterings[r.J[b]]);

  r.total_vi.resize(jn);
  int best = 0;
  for (int a = 0; a < jn; ++a) {
    double s = 0.0;
    for (int b = 0; b < jn; ++b) s += d(a, b);
    r.total_vi[a] = s;
    if (s <= r.total_vi[best]) best = a;  // ties go to the later time
  }
  r.optimal_index = r.J[best];
  return r;
}

MlundResult mlund(const PointCloud& data, const GraphConfig& graph_cfg,
                  const SweepConfig& cfg, int m) {
  const MarkovModel model = build_markov(data, graph_cfg, m);
  const DensityEstimate density = kde(data, graph_cfg);
  return mlund_over_model(model, density, cfg);
}

}  // namespace mdc
