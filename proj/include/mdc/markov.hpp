#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mdc/types.hpp"

namespace mdc {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Square nonnegative matrix stored dense (complete graphs) or sparse
/// (KNN graphs); both sides expose the same handful of operations.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(MatrixXd dense);
  explicit SquareMatrix(SparseRowMatrix sparse);

  int rows() const { return n_; }
  bool is_dense() const { return is_dense_; }
  double coeff(int i, int j) const;
  VectorXd row_sums() const;
  void matvec(const double* x, double* y) const;
  MatrixXd to_dense() const;
  const MatrixXd& dense() const { return dense_; }
  const SparseRowMatrix& sparse() const { return sparse_; }

 private:
  bool is_dense_ = true;
  int n_ = 0;
  MatrixXd dense_;
  SparseRowMatrix sparse_;
};

struct Spectrum {
  VectorXd values;   // |values| non-increasing, values[0] == 1
  MatrixXd vectors;  // n x m right eigenvectors of P, unit norm in l2(pi)
  int m() const { return static_cast<int>(values.size()); }
};

struct MarkovModel {
  int n = 0;
  SquareMatrix W;  // symmetric kernel weights
  SquareMatrix P;  // row-stochastic transition matrix
  VectorXd degrees;
  VectorXd pi;
  double pi_min = 0.0;
  Spectrum spectrum;

  double lambda2_abs() const { return std::abs(spectrum.values[1]); }
  MatrixXd P_dense() const { return P.to_dense(); }
};

/// Kernel graph, transition matrix, stationary distribution, and truncated
/// spectrum for a point cloud. KNN adjacency is symmetrized by union and
/// every point carries a unit self-loop. Throws DisconnectedGraph when the
/// kernel graph has more than one component.
MarkovModel build_markov(const PointCloud& data, const GraphConfig& cfg,
                         int m = 10);

/// Same model built from an explicit symmetric weight matrix (no self-loops
/// added). Used by tests and by analyses of hand-built chains.
MarkovModel markov_from_weights(const MatrixXd& W, int m);

VectorXd stationary_distribution(const MarkovModel& model);

}  // namespace mdc
