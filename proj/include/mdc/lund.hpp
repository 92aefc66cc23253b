#pragma once

#include <vector>

#include "mdc/geometry.hpp"
#include "mdc/markov.hpp"
#include "mdc/types.hpp"

namespace mdc {

/// Cluster-count estimate from the sorted score sequence.
struct KEstimate {
  int K = 1;
  std::vector<int> order;        // point indices, score non-increasing, index ties ascending
  bool all_scores_equal = false; // no meaningful gap; K forced to 1
};

/// K maximizing the ratio of consecutive sorted scores (denominators floored
/// at 1e-300). A constant score sequence carries no gap information and is
/// flagged instead.
KEstimate estimate_K(const VectorXd& score);

struct LundResult {
  Clustering clustering;
  bool all_scores_equal = false;
};

/// Mode detection and density-ordered label propagation at one diffusion time.
LundResult lund_cluster(const MarkovModel& model, const DensityEstimate& density,
                        double t);

}  // namespace mdc
