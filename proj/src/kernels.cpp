#include "mdc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mdc::kernels {

namespace {

inline double sq_dist(const MatrixXd& pts, int i, int j) {
  const int d = static_cast<int>(pts.cols());
  double s = 0.0;
  for (int c = 0; c < d; ++c) {
    const double diff = pts(i, c) - pts(j, c);
    s += diff * diff;
  }
  return s;
}

void knn_row(const MatrixXd& pts, int i, int k, std::vector<std::pair<double, int>>& buf,
             MatrixXi& idx, MatrixXd& sq) {
  const int n = static_cast<int>(pts.rows());
  buf.clear();
  buf.reserve(n - 1);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    buf.emplace_back(sq_dist(pts, i, j), j);
  }
  std::partial_sort(buf.begin(), buf.begin() + k, buf.end());
  for (int c = 0; c < k; ++c) {
    sq(i, c) = buf[c].first;
    idx(i, c) = buf[c].second;
  }
}

}  // namespace

MatrixXd pairwise_sq_dist(const MatrixXd& pts) {
  const int n = static_cast<int>(pts.rows());
  MatrixXd out(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    out(i, i) = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      out(i, j) = sq_dist(pts, i, j);
    }
  }
  return out;
}

MatrixXd pairwise_sq_dist_serial(const MatrixXd& pts) {
  const int n = static_cast<int>(pts.rows());
  MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      out(i, j) = sq_dist(pts, i, j);
    }
  }
  return out;
}

KnnResult knn_search(const MatrixXd& pts, int k) {
  const int n = static_cast<int>(pts.rows());
  KnnResult r{MatrixXi(n, k), MatrixXd(n, k)};
#pragma omp parallel
  {
    std::vector<std::pair<double, int>> buf;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) knn_row(pts, i, k, buf, r.idx, r.sq_dist);
  }
  return r;
}

KnnResult knn_search_serial(const MatrixXd& pts, int k) {
  const int n = static_cast<int>(pts.rows());
  KnnResult r{MatrixXi(n, k), MatrixXd(n, k)};
  std::vector<std::pair<double, int>> buf;
  for (int i = 0; i < n; ++i) knn_row(pts, i, k, buf, r.idx, r.sq_dist);
  return r;
}

// Row blocks of fixed size keep the decomposition (and therefore every
// partial sum) independent of the thread count; within a block Eigen walks
// the column-major storage contiguously.
constexpr int kMatvecBlock = 128;

void dense_matvec(const MatrixXd& A, const double* x, double* y) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  Eigen::Map<const VectorXd> xv(x, m);
  const int blocks = (n + kMatvecBlock - 1) / kMatvecBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < blocks; ++b) {
    const int r0 = b * kMatvecBlock;
    const int len = std::min(kMatvecBlock, n - r0);
    Eigen::Map<VectorXd>(y + r0, len).noalias() = A.middleRows(r0, len) * xv;
  }
}

void dense_matvec_serial(const MatrixXd& A, const double* x, double* y) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  Eigen::Map<const VectorXd> xv(x, m);
  const int blocks = (n + kMatvecBlock - 1) / kMatvecBlock;
  for (int b = 0; b < blocks; ++b) {
    const int r0 = b * kMatvecBlock;
    const int len = std::min(kMatvecBlock, n - r0);
    Eigen::Map<VectorXd>(y + r0, len).noalias() = A.middleRows(r0, len) * xv;
  }
}

namespace {

constexpr int kSymBlock = 256;

void sym_block_partial(const MatrixXd& A, const double* x, int j0, int j1,
                       double* partial) {
  const int n = static_cast<int>(A.rows());
  std::fill(partial, partial + n, 0.0);
  for (int j = j0; j < j1; ++j) {
    const double* col = A.col(j).data();
    const double xj = x[j];
    double acc = 0.0;
    for (int i = 0; i < j; ++i) {
      partial[i] += col[i] * xj;
      acc += col[i] * x[i];
    }
    partial[j] += acc + col[j] * xj;
  }
}

}  // namespace

void dense_symmetric_matvec(const MatrixXd& A, const double* x, double* y) {
  const int n = static_cast<int>(A.rows());
  const int blocks = (n + kSymBlock - 1) / kSymBlock;
  std::vector<double> partials(static_cast<size_t>(blocks) * n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int b = 0; b < blocks; ++b) {
    const int j0 = b * kSymBlock;
    const int j1 = std::min(n, j0 + kSymBlock);
    sym_block_partial(A, x, j0, j1, partials.data() + static_cast<size_t>(b) * n);
  }
  std::fill(y, y + n, 0.0);
  for (int b = 0; b < blocks; ++b) {
    const double* p = partials.data() + static_cast<size_t>(b) * n;
    for (int i = 0; i < n; ++i) y[i] += p[i];
  }
}

void dense_symmetric_matvec_serial(const MatrixXd& A, const double* x, double* y) {
  const int n = static_cast<int>(A.rows());
  const int blocks = (n + kSymBlock - 1) / kSymBlock;
  std::vector<double> partials(static_cast<size_t>(blocks) * n);
  for (int b = 0; b < blocks; ++b) {
    const int j0 = b * kSymBlock;
    const int j1 = std::min(n, j0 + kSymBlock);
    sym_block_partial(A, x, j0, j1, partials.data() + static_cast<size_t>(b) * n);
  }
  std::fill(y, y + n, 0.0);
  for (int b = 0; b < blocks; ++b) {
    const double* p = partials.data() + static_cast<size_t>(b) * n;
    for (int i = 0; i < n; ++i) y[i] += p[i];
  }
}

void sparse_matvec(const SparseRowMatrix& A, const double* x, double* y) {
  const int n = static_cast<int>(A.rows());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (SparseRowMatrix::InnerIterator it(A, i); it; ++it)
      s += it.value() * x[it.col()];
    y[i] = s;
  }
}

void sparse_matvec_serial(const SparseRowMatrix& A, const double* x, double* y) {
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (SparseRowMatrix::InnerIterator it(A, i); it; ++it)
      s += it.value() * x[it.col()];
    y[i] = s;
  }
}

double squared_point_dist(const MatrixXd& coords_cols, int i, int j) {
  const int m = static_cast<int>(coords_cols.rows());
  const double* a = coords_cols.col(i).data();
  const double* b = coords_cols.col(j).data();
  double s = 0.0;
  for (int c = 0; c < m; ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s;
}

void coordinate_order(const MatrixXd& coords_cols, std::vector<int>& order,
                      std::vector<int>& rank) {
  const int n = static_cast<int>(coords_cols.cols());
  order.resize(n);
  rank.resize(n);
  std::iota(order.begin(), order.end(), 0);
  const int c = coords_cols.rows() > 1 ? 1 : 0;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (coords_cols(c, a) != coords_cols(c, b)) return coords_cols(c, a) < coords_cols(c, b);
    return a < b;
  });
  for (int r = 0; r < n; ++r) rank[order[r]] = r;
}

std::pair<int, double> nearest_admissible(
    const MatrixXd& coords_cols, const std::vector<int>& order_by_c2,
    const std::vector<int>& rank_of, int x,
    const std::function<bool(int)>& admissible) {
  const int n = static_cast<int>(coords_cols.cols());
  const int c = coords_cols.rows() > 1 ? 1 : 0;
  const double cx = coords_cols(c, x);
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();

  auto consider = [&](int y) {
    if (y == x || !admissible(y)) return;
    const double d = squared_point_dist(coords_cols, x, y);
    if (d < best_d || (d == best_d && y < best)) {
      best_d = d;
      best = y;
    }
  };

  int lo = rank_of[x] - 1;
  int hi = rank_of[x] + 1;
  bool lo_live = lo >= 0;
  bool hi_live = hi < n;
  while (lo_live || hi_live) {
    double lo_gap = lo_live ? cx - coords_cols(c, order_by_c2[lo])
                            : std::numeric_limits<double>::infinity();
    double hi_gap = hi_live ? coords_cols(c, order_by_c2[hi]) - cx
                            : std::numeric_limits<double>::infinity();
    if (lo_live && (!hi_live || lo_gap <= hi_gap)) {
      if (lo_gap * lo_gap > best_d) {
        lo_live = false;
        continue;
      }
      consider(order_by_c2[lo]);
      if (--lo < 0) lo_live = false;
    } else {
      if (hi_gap * hi_gap > best_d) {
        hi_live = false;
        continue;
      }
      consider(order_by_c2[hi]);
      if (++hi >= n) hi_live = false;
    }
  }
  return {best, best_d};
}

std::pair<int, double> nearest_admissible_serial(
    const MatrixXd& coords_cols, int x, const std::function<bool(int)>& admissible) {
  const int n = static_cast<int>(coords_cols.cols());
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int y = 0; y < n; ++y) {
    if (y == x || !admissible(y)) continue;
    const double d = squared_point_dist(coords_cols, x, y);
    if (d < best_d || (d == best_d && y < best)) {
      best_d = d;
      best = y;
    }
  }
  return {best, best_d};
}

double max_point_sq_dist(const MatrixXd& coords_cols, int x) {
  const int n = static_cast<int>(coords_cols.cols());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (int y = 0; y < n; ++y) {
    const double d = squared_point_dist(coords_cols, x, y);
    if (d > m) m = d;
  }
  return m;
}

double max_point_sq_dist_serial(const MatrixXd& coords_cols, int x) {
  const int n = static_cast<int>(coords_cols.cols());
  double m = 0.0;
  for (int y = 0; y < n; ++y) m = std::max(m, squared_point_dist(coords_cols, x, y));
  return m;
}

namespace {

// Density comparison used by rho: y qualifies against x if it is strictly
// denser, or equally dense with a smaller index.
inline bool denser(const VectorXd& p, int y, int x) {
  return p[y] > p[x] || (p[y] == p[x] && y < x);
}

}  // namespace

VectorXd rho_scan(const MatrixXd& coords_cols, const VectorXd& density,
                  int density_argmax) {
  const int n = static_cast<int>(coords_cols.cols());
  std::vector<int> order, rank;
  coordinate_order(coords_cols, order, rank);
  VectorXd rho(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (int x = 0; x < n; ++x) {
    if (x == density_argmax) {
      rho[x] = std::sqrt(max_point_sq_dist_serial(coords_cols, x));
      continue;
    }
    auto [best, d] = nearest_admissible(
        coords_cols, order, rank, x, [&](int y) { return denser(density, y, x); });
    rho[x] = best >= 0 ? std::sqrt(d) : 0.0;
  }
  return rho;
}

VectorXd rho_scan_serial(const MatrixXd& coords_cols, const VectorXd& density,
                         int density_argmax) {
  const int n = static_cast<int>(coords_cols.cols());
  VectorXd rho(n);
  for (int x = 0; x < n; ++x) {
    if (x == density_argmax) {
      rho[x] = std::sqrt(max_point_sq_dist_serial(coords_cols, x));
      continue;
    }
    auto [best, d] = nearest_admissible_serial(
        coords_cols, x, [&](int y) { return denser(density, y, x); });
    rho[x] = best >= 0 ? std::sqrt(d) : 0.0;
  }
  return rho;
}

}  // namespace mdc::kernels
