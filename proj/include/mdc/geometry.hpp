#pragma once

#include "mdc/markov.hpp"
#include "mdc/types.hpp"

namespace mdc {

/// Normalized kernel density estimate over a fixed neighbor count.
struct DensityEstimate {
  VectorXd p;  // sums to one, strictly positive
  double bandwidth = 0.0;
  int neighbor_count = 0;
};

DensityEstimate kde(const PointCloud& data, const GraphConfig& cfg);

/// Index of the unique global density maximizer (lowest index on ties).
int density_argmax(const VectorXd& p);

/// Diffusion map at time t. Column i holds |lambda_i|^t psi_i; pairwise
/// distances in this embedding equal the signed-power definition at every
/// integer t because only even powers of lambda enter a distance.
struct DiffusionEmbedding {
  double t = 0.0;
  MatrixXd coords;  // n x m
};

DiffusionEmbedding diffusion_map(const MarkovModel& model, double t);

/// Same embedding, one point per column (the layout the scan kernels want).
MatrixXd embedding_columns(const MarkovModel& model, double t);

double diffusion_distance(const MarkovModel& model, double t, int i, int j);

/// Diffusion distance from each point to its nearest higher-density point;
/// the global density maximizer receives its farthest distance instead.
VectorXd rho_t(const MarkovModel& model, const DensityEstimate& density,
               double t);

/// Elementwise score p(x) * rho_t(x).
VectorXd lund_score(const DensityEstimate& density, const VectorXd& rho);

}  // namespace mdc
