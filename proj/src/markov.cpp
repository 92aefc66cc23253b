#include "mdc/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mdc/eigs.hpp"
#include "mdc/error.hpp"
#include "mdc/kernels.hpp"

namespace mdc {

SquareMatrix::SquareMatrix(MatrixXd dense)
    : is_dense_(true), n_(static_cast<int>(dense.rows())), dense_(std::move(dense)) {}

SquareMatrix::SquareMatrix(SparseRowMatrix sparse)
    : is_dense_(false), n_(static_cast<int>(sparse.rows())), sparse_(std::move(sparse)) {}

double SquareMatrix::coeff(int i, int j) const {
  return is_dense_ ? dense_(i, j) : sparse_.coeff(i, j);
}

VectorXd SquareMatrix::row_sums() const {
  VectorXd s(n_);
  if (is_dense_) {
    // symmetric storage: column sums equal row sums bit for bit and walk
    // the column-major layout contiguously
    for (int j = 0; j < n_; ++j) s[j] = dense_.col(j).sum();
  } else {
    for (int i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (SparseRowMatrix::InnerIterator it(sparse_, i); it; ++it)
        acc += it.value();
      s[i] = acc;
    }
  }
  return s;
}

void SquareMatrix::matvec(const double* x, double* y) const {
  if (is_dense_)
    kernels::dense_matvec(dense_, x, y);
  else
    kernels::sparse_matvec(sparse_, x, y);
}

MatrixXd SquareMatrix::to_dense() const {
  if (is_dense_) return dense_;
  return MatrixXd(sparse_);
}

namespace {

int count_components_sparse(const SparseRowMatrix& W) {
  const int n = static_cast<int>(W.rows());
  std::vector<int> state(n, 0);
  std::vector<int> stack;
  int components = 0;
  for (int s = 0; s < n; ++s) {
    if (state[s]) continue;
    ++components;
    stack.push_back(s);
    state[s] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (SparseRowMatrix::InnerIterator it(W, u); it; ++it) {
        if (it.value() > 0.0 && !state[it.col()]) {
          state[it.col()] = 1;
          stack.push_back(static_cast<int>(it.col()));
        }
      }
    }
  }
  return components;
}

int count_components_dense(const MatrixXd& W) {
  const int n = static_cast<int>(W.rows());
  std::vector<int> state(n, 0);
  std::vector<int> stack;
  int components = 0;
  for (int s = 0; s < n; ++s) {
    if (state[s]) continue;
    ++components;
    stack.push_back(s);
    state[s] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (v != u && W(u, v) > 0.0 && !state[v]) {
          state[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

constexpr int kDenseSpectrumLimit = 1000;

// Spectrum of P via the symmetric conjugation D^{1/2} P D^{-1/2}; the exact
// Perron pair (1, constant) is deflated analytically so that |lambda_2| very
// close to 1 is still resolved. Eigenvectors come back scaled to unit norm
// in l2(pi).
Spectrum spectrum_from_graph(const SquareMatrix& W, const VectorXd& degrees,
                             int m) {
  const int n = W.rows();
  m = std::max(2, std::min(m, n));
  const VectorXd inv_sqrt_d = degrees.cwiseSqrt().cwiseInverse();
  const double total_degree = degrees.sum();

  eigs::Result eig;
  if (n <= kDenseSpectrumLimit) {
    MatrixXd A;
    if (W.is_dense()) {
      A = W.dense();
    } else {
      A = W.to_dense();
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) *= inv_sqrt_d[i] * inv_sqrt_d[j];
    A = 0.5 * (A + A.transpose().eval());  // scrub conjugation round-off
    eig = eigs::topm_dense(A, m);
  } else {
    VectorXd scratch(n);
    auto apply = [&](const double* x, double* y) {
      for (int i = 0; i < n; ++i) scratch[i] = inv_sqrt_d[i] * x[i];
      if (W.is_dense())
        kernels::dense_symmetric_matvec(W.dense(), scratch.data(), y);
      else
        W.matvec(scratch.data(), y);
      for (int i = 0; i < n; ++i) y[i] *= inv_sqrt_d[i];
    };
    VectorXd perron = degrees.cwiseSqrt();
    perron /= perron.norm();
    eigs::Options opts;
    eig = eigs::topm_symmetric(apply, n, m, opts, &perron, 1.0);
    if (!eig.converged)
      fail(ErrorCode::eigensolver_failure,
           "Lanczos failed to converge to the requested spectrum");
  }

  Spectrum spec;
  const int got = static_cast<int>(eig.values.size());
  spec.values = eig.values;
  spec.values[0] = 1.0;
  for (int i = 1; i < got; ++i)
    spec.values[i] = std::clamp(spec.values[i], -1.0, 1.0);
  spec.vectors = MatrixXd(n, got);
  const double scale = std::sqrt(total_degree);
  spec.vectors.col(0) = VectorXd::Ones(n);
  for (int j = 1; j < got; ++j)
    spec.vectors.col(j) = scale * (eig.vectors.col(j).array() * inv_sqrt_d.array()).matrix();
  return spec;
}

MarkovModel finish_model(SquareMatrix W, int m) {
  MarkovModel model;
  model.n = W.rows();
  model.degrees = W.row_sums();
  for (int i = 0; i < model.n; ++i)
    if (model.degrees[i] <= 0.0)
      fail(ErrorCode::degenerate_kernel,
           "weight row " + std::to_string(i) + " sums to zero");

  const int components = W.is_dense() ? count_components_dense(W.dense())
                                      : count_components_sparse(W.sparse());
  if (components != 1)
    fail(ErrorCode::disconnected_graph,
         "kernel graph has " + std::to_string(components) +
             " components; increase the neighbor count or sigma");

  model.pi = model.degrees / model.degrees.sum();
  model.pi_min = model.pi.minCoeff();
  model.spectrum = spectrum_from_graph(W, model.degrees, m);

  if (W.is_dense()) {
    MatrixXd P(model.n, model.n);
    const Eigen::ArrayXd inv_deg = model.degrees.array().inverse();
    for (int j = 0; j < model.n; ++j)
      P.col(j) = W.dense().col(j).array() * inv_deg;
    model.P = SquareMatrix(std::move(P));
  } else {
    SparseRowMatrix P = W.sparse();
    for (int i = 0; i < model.n; ++i) {
      const double inv = 1.0 / model.degrees[i];
      for (SparseRowMatrix::InnerIterator it(P, i); it; ++it)
        it.valueRef() *= inv;
    }
    model.P = SquareMatrix(std::move(P));
  }
  model.W = std::move(W);
  return model;
}

}  // namespace

MarkovModel build_markov(const PointCloud& data, const GraphConfig& cfg, int m) {
  const int n = data.n();
  if (n < 2) fail(ErrorCode::usage, "need at least two points");
  if (cfg.sigma <= 0.0) fail(ErrorCode::usage, "sigma must be positive");
  const double inv_s2 = 1.0 / (cfg.sigma * cfg.sigma);

  if (cfg.mode == GraphMode::complete) {
    MatrixXd W(n, n);
    // column-parallel so writes stay contiguous in the column-major storage
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (i == j) {
          W(j, j) = 1.0;  // kernel at zero distance keeps the chain aperiodic
          continue;
        }
        double d2 = 0.0;
        for (int c = 0; c < data.dim(); ++c) {
          const double diff = data.points(i, c) - data.points(j, c);
          d2 += diff * diff;
        }
        W(i, j) = std::exp(-d2 * inv_s2);
      }
    }
    return finish_model(SquareMatrix(std::move(W)), m);
  }

  const int N = cfg.knn_neighbors;
  if (N < 1 || N >= n) fail(ErrorCode::usage, "knn neighbor count must be in [1, n)");
  auto knn = kernels::knn_search(data.points, N);

  // Union symmetrization: keep the edge if either endpoint listed the other.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * (2 * N + 1));
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, 1.0);
    for (int c = 0; c < N; ++c) {
      const int j = knn.idx(i, c);
      const double w = std::exp(-knn.sq_dist(i, c) * inv_s2);
      trips.emplace_back(i, j, w);
      trips.emplace_back(j, i, w);
    }
  }
  SparseRowMatrix W(n, n);
  // Duplicate entries carry identical kernel values; keep one.
  W.setFromTriplets(trips.begin(), trips.end(),
                    [](const double& a, const double&) { return a; });
  return finish_model(SquareMatrix(std::move(W)), m);
}

MarkovModel markov_from_weights(const MatrixXd& W, int m) {
  const int n = static_cast<int>(W.rows());
  if (n < 2 || W.cols() != n) fail(ErrorCode::usage, "weight matrix must be square, n >= 2");
  if (!W.isApprox(W.transpose(), 1e-12))
    fail(ErrorCode::usage, "weight matrix must be symmetric");
  if (W.minCoeff() < 0.0) fail(ErrorCode::usage, "weights must be nonnegative");
  return finish_model(SquareMatrix(W), m);
}

VectorXd stationary_distribution(const MarkovModel& model) { return model.pi; }

}  // namespace mdc
