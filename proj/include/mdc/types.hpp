#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace mdc {

using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// n x D point set with optional ground-truth labels (one per row).
struct PointCloud {
  MatrixXd points;
  std::optional<VectorXi> truth_labels;

  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

enum class GraphMode { knn, complete };

struct GraphConfig {
  GraphMode mode = GraphMode::knn;
  int knn_neighbors = 25;   // ignored for complete graphs
  double sigma = 1.0;       // diffusion scale of the Gaussian kernel
  double sigma0 = 1.0;      // KDE bandwidth
  int kde_neighbors = 25;   // neighbor count of the KDE sum
};

/// Partition of n points into K clusters. Labels take every value in 1..K;
/// modes[k] is the point index of the mode that seeded cluster k+1.
struct Clustering {
  VectorXi labels;
  int K = 0;
  std::vector<int> modes;

  int n() const { return static_cast<int>(labels.size()); }
};

struct SweepConfig {
  double beta = 2.0;  // exponential sampling rate, > 1
  double tau = 1e-5;  // stationarity threshold, in (0,1)
};

}  // namespace mdc
