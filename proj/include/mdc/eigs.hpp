#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace mdc::eigs {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using MatVec = std::function<void(const double* x, double* y)>;

struct Options {
  double tol = 1e-13;       // residual tolerance for the leading modes
  double tail_tol = 1e-10;  // residual tolerance past `strict_modes`
  int strict_modes = 3;     // modes held to `tol` (lambda_2 drives the sweep)
  int max_basis = 0;        // 0 = automatic
  uint64_t seed = 0x2545f4914f6cdd1dULL;
};

struct Result {
  VectorXd values;   // sorted by |value| descending, positive first on ties
  MatrixXd vectors;  // orthonormal columns
  bool converged = false;
  int basis_size = 0;
};

/// Top-m eigenpairs (largest |value|) of a symmetric operator via Lanczos
/// with full reorthogonalization. `known_vector`, when given, is an exact
/// dominant eigenvector (value `known_value`) that is deflated from the
/// iteration and re-inserted in front of the output.
Result topm_symmetric(const MatVec& apply, int n, int m, const Options& opts,
                      const VectorXd* known_vector = nullptr,
                      double known_value = 1.0);

/// Full dense decomposition truncated to the top m by |value|.
Result topm_dense(const MatrixXd& A, int m);

}  // namespace mdc::eigs
