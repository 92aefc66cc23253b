#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <utility>
#include <vector>

namespace mdc::kernels {

using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Every parallel kernel here has a serial twin (suffix `_serial`) producing
// bit-identical output. Tests compare the pair; tools/mdc_bench times them.
// Parallel loops write disjoint rows/elements, so results do not depend on
// the thread count.

MatrixXd pairwise_sq_dist(const MatrixXd& pts);
MatrixXd pairwise_sq_dist_serial(const MatrixXd& pts);

/// k nearest neighbors per point, self excluded, ordered by (distance, index).
struct KnnResult {
  MatrixXi idx;      // n x k
  MatrixXd sq_dist;  // n x k
};
KnnResult knn_search(const MatrixXd& pts, int k);
KnnResult knn_search_serial(const MatrixXd& pts, int k);

void dense_matvec(const MatrixXd& A, const double* x, double* y);
void dense_matvec_serial(const MatrixXd& A, const double* x, double* y);

/// Matvec for symmetric A touching only the upper triangle (half the memory
/// traffic). Partial sums live in fixed column blocks and are reduced in
/// block order, so the result does not depend on the thread count.
void dense_symmetric_matvec(const MatrixXd& A, const double* x, double* y);
void dense_symmetric_matvec_serial(const MatrixXd& A, const double* x, double* y);
void sparse_matvec(const SparseRowMatrix& A, const double* x, double* y);
void sparse_matvec_serial(const SparseRowMatrix& A, const double* x, double* y);

/// Squared distance between embedding points stored one per column.
double squared_point_dist(const MatrixXd& coords_cols, int i, int j);

/// Lexicographic min over admissible candidates y of (||coords(x)-coords(y)||^2, y),
/// coordinates stored one point per column. Returns (-1, inf) when no
/// candidate is admissible.
///
/// The fast path scans candidates outward from x in the order of the second
/// embedding coordinate and prunes once that single coordinate already
/// exceeds the incumbent distance; pruning is strict, so ties survive and the
/// result equals the serial full scan exactly.
std::pair<int, double> nearest_admissible(
    const MatrixXd& coords_cols, const std::vector<int>& order_by_c2,
    const std::vector<int>& rank_of, int x,
    const std::function<bool(int)>& admissible);
std::pair<int, double> nearest_admissible_serial(
    const MatrixXd& coords_cols, int x, const std::function<bool(int)>& admissible);

double max_point_sq_dist(const MatrixXd& coords_cols, int x);
double max_point_sq_dist_serial(const MatrixXd& coords_cols, int x);

/// rho vector of a diffusion embedding (one point per column): for each point
/// the embedding distance to its nearest admissible higher-density point; the
/// (unique) density argmax gets its farthest distance instead.
VectorXd rho_scan(const MatrixXd& coords_cols, const VectorXd& density,
                  int density_argmax);
VectorXd rho_scan_serial(const MatrixXd& coords_cols, const VectorXd& density,
                         int density_argmax);

/// Sort order of the second embedding coordinate plus its inverse, shared by
/// the pruned scans.
void coordinate_order(const MatrixXd& coords_cols, std::vector<int>& order,
                      std::vector<int>& rank);

}  // namespace mdc::kernels
