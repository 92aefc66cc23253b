#pragma once

#include <cstdint>
#include <vector>

#include "mdc/markov.hpp"
#include "mdc/types.hpp"

namespace mdc {

/// Lloyd iterations with careful seeding, best of `restarts` runs by
/// (inertia, restart index). Deterministic given the seed.
Clustering kmeans(const MatrixXd& points, int K, uint64_t seed,
                  int restarts = 10);

/// Embed by the first K eigenvectors of P, row-normalize to unit length
/// (zero rows stay zero), then seeded K-means.
Clustering spectral_cluster(const MarkovModel& model, int K, uint64_t seed);

struct HscClustering {
  Clustering clustering;
  double time = 0.0;      // grid time of the eigengap local maximum
  double alpha = 0.0;     // (t_l - t_{l-1}) / t_max
  double beta_gap = 0.0;  // eigengap at t_l
};

/// Eigengap sweep over t = 1..t_max; one spectral clustering per local
/// maximum of the gap curve. Plateaus resolve to their first time.
std::vector<HscClustering> hsc(const MarkovModel& model, int t_max,
                               uint64_t seed);

/// Same sweep over an explicit (for example exponential) time grid.
std::vector<HscClustering> hsc_over_times(const MarkovModel& model,
                                          const std::vector<double>& times,
                                          uint64_t seed);

/// Single-linkage merge tree. Children use scipy-style ids: leaf i in [0,n),
/// merge j creates id n+j. Heights are non-decreasing; max_within records the
/// largest cluster diameter existing after the merge, which makes the
/// selection rule below self-contained.
struct Dendrogram {
  struct Merge {
    int a = 0, b = 0;
    double height = 0.0;
    int size = 0;
    double max_within = 0.0;
  };
  int n = 0;
  std::vector<Merge> merges;
};

Dendrogram slc(const MatrixXd& points);

/// Labels at the K-cluster level of the tree.
Clustering slc_cut(const Dendrogram& dendro, int K);

/// Cut minimizing (max within-cluster distance) / (min between-cluster
/// linkage) over 2 <= K <= n/2; ties take the smaller K.
Clustering slc_select(const Dendrogram& dendro);

}  // namespace mdc
