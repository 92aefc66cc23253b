#pragma once

#include <map>
#include <vector>

#include "mdc/geometry.hpp"
#include "mdc/lund.hpp"
#include "mdc/markov.hpp"
#include "mdc/types.hpp"

namespace mdc {

/// Largest grid exponent: ceil(log_beta(log_|lambda2|(tau pi_min / 2))),
/// clamped below at 0. Throws Lambda2Unity when |lambda2| >= 1 - 1e-12.
int compute_T(double lambda2_abs, double pi_min, const SweepConfig& cfg);

/// Grid {0, 1, beta, ..., beta^T}.
std::vector<double> time_grid(int T, double beta);

struct MlundResult {
  std::vector<double> times;
  std::vector<Clustering> clusterings;  // aligned with times
  std::vector<int> K;                   // aligned with times
  std::vector<char> score_flat;         // AllScoresEqual flag per time
  std::vector<int> J;                   // grid indices with K in [2, n/2)
  std::vector<double> total_vi;         // aligned with J
  int optimal_index = -1;               // grid index, -1 when J is empty
  int T = 0;
  double lambda2_abs = 0.0;
  double pi_min = 0.0;

  bool has_optimal() const { return optimal_index >= 0; }
  const Clustering& optimal() const { return clusterings[optimal_index]; }
};

/// Exponential LUND sweep with total-VI model selection over the nontrivial
/// clusterings. Ties in total VI go to the later time.
MlundResult mlund(const PointCloud& data, const GraphConfig& graph_cfg,
                  const SweepConfig& cfg, int m = 10);

/// Same sweep over a prebuilt model and density (shared with the compare
/// harness so every diffusion algorithm sees the same graph).
MlundResult mlund_over_model(const MarkovModel& model,
                             const DensityEstimate& density,
                             const SweepConfig& cfg);

/// Sum of VI distances from each clustering to all others (self term
/// included), keyed by time. Duplicate clusterings keep their multiplicity.
std::map<double, double> total_vi_table(const std::vector<Clustering>& clusterings,
                                        const std::vector<double>& times);

}  // namespace mdc
