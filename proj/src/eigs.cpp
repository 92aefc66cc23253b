#include "mdc/eigs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mdc/error.hpp"
#include "mdc/rng.hpp"

namespace mdc::eigs {

namespace {

// Serial dot products keep the iteration identical for any thread count;
// at desk scale they are far from the bottleneck.
double dot(int n, const double* a, const double* b) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(int n, double alpha, const double* x, double* y) {
  for (int i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// y -= V V^T y over the first k columns, two passes.
void reorthogonalize(const MatrixXd& V, int k, double* y) {
  const int n = static_cast<int>(V.rows());
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < k; ++j) {
      const double c = dot(n, V.col(j).data(), y);
      axpy(n, -c, V.col(j).data(), y);
    }
  }
}

void sort_by_abs_desc(VectorXd& values, MatrixXd& vectors) {
  const int m = static_cast<int>(values.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double aa = std::abs(values[a]), ab = std::abs(values[b]);
    if (aa != ab) return aa > ab;
    return values[a] > values[b];  // positive branch first on |.| ties
  });
  VectorXd v(m);
  MatrixXd x(vectors.rows(), m);
  for (int i = 0; i < m; ++i) {
    v[i] = values[order[i]];
    x.col(i) = vectors.col(order[i]);
  }
  values.swap(v);
  vectors.swap(x);
}

void fix_signs(MatrixXd& vectors) {
  for (int j = 0; j < vectors.cols(); ++j) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (vectors(arg, j) < 0) vectors.col(j) = -vectors.col(j);
  }
}

struct RitzPairs {
  VectorXd values;
  MatrixXd coeff;
  double last_beta = 0.0;
};

RitzPairs extract_ritz(const std::vector<double>& alpha,
                       const std::vector<double>& beta, int k, int top,
                       double last_beta) {
  MatrixXd T = MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
  VectorXd theta = es.eigenvalues();
  MatrixXd y = es.eigenvectors();
  sort_by_abs_desc(theta, y);
  RitzPairs r;
  r.values = theta.head(top);
  r.coeff = y.leftCols(top);
  r.last_beta = last_beta;
  return r;
}

}  // namespace

Result topm_dense(const MatrixXd& A, int m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::eigensolver_failure, "dense symmetric eigensolver failed");
  VectorXd values = es.eigenvalues();
  MatrixXd vectors = es.eigenvectors();
  sort_by_abs_desc(values, vectors);
  const int keep = std::min<int>(m, values.size());
  Result r;
  r.values = values.head(keep);
  r.vectors = vectors.leftCols(keep);
  fix_signs(r.vectors);
  r.converged = true;
  r.basis_size = static_cast<int>(A.rows());
  return r;
}

Result topm_symmetric(const MatVec& apply, int n, int m, const Options& opts,
                      const VectorXd* known_vector, double known_value) {
  const int wanted = known_vector ? m - 1 : m;
  if (wanted <= 0) {
    Result r;
    r.values = VectorXd::Constant(1, known_value);
    r.vectors = *known_vector;
    r.converged = true;
    return r;
  }

  const int hard_cap =
      opts.max_basis > 0 ? std::min(opts.max_basis, n) : std::min(n, 1200);
  int capacity = std::min(hard_cap, std::max(6 * wanted + 60, 160));

  Rng rng(opts.seed);
  MatrixXd V(n, capacity);
  std::vector<double> alpha, beta;
  alpha.reserve(hard_cap);
  beta.reserve(hard_cap);

  auto ortho_against_known = [&](double* y) {
    if (!known_vector) return;
    for (int pass = 0; pass < 2; ++pass) {
      const double c = dot(n, known_vector->data(), y);
      axpy(n, -c, known_vector->data(), y);
    }
  };

  auto random_start = [&](int k, double* y) {
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    ortho_against_known(y);
    reorthogonalize(V, k, y);
  };

  VectorXd w(n), v_cur(n);
  random_start(0, v_cur.data());
  v_cur /= v_cur.norm();
  V.col(0) = v_cur;

  RitzPairs ritz;
  int k = 0;
  bool converged = false;

  while (true) {
    apply(V.col(k).data(), w.data());
    const double a = dot(n, V.col(k).data(), w.data());
    alpha.push_back(a);
    axpy(n, -a, V.col(k).data(), w.data());
    if (k > 0) axpy(n, -beta[k - 1], V.col(k - 1).data(), w.data());
    ortho_against_known(w.data());
    reorthogonalize(V, k + 1, w.data());
    double b = std::sqrt(dot(n, w.data(), w.data()));
    ++k;  // k vectors built; T is k x k, b couples to the unbuilt vector

    const int top = std::min(wanted, k);
    const bool at_cap = k == hard_cap;
    if (k >= wanted + 2 && (k % 8 == 0 || at_cap)) {
      ritz = extract_ritz(alpha, beta, k, top, b);
      bool ok = true;
      for (int i = 0; i < top; ++i) {
        const double resid = std::abs(b * ritz.coeff(k - 1, i));
        const double want = i < opts.strict_modes ? opts.tol : opts.tail_tol;
        if (resid > want) {
          ok = false;
          break;
        }
      }
      if (ok || at_cap) {
        converged = ok;
        break;
      }
    } else if (at_cap) {
      ritz = extract_ritz(alpha, beta, k, top, b);
      break;
    }

    if (b < 1e-14) {
      // Happy breakdown: the span so far is invariant. Continue in the
      // orthogonal complement, or stop exactly if nothing is left.
      random_start(k, w.data());
      b = std::sqrt(dot(n, w.data(), w.data()));
      if (b < 1e-13) {
        ritz = extract_ritz(alpha, beta, k, top, 0.0);
        converged = true;
        break;
      }
      beta.push_back(0.0);
    } else {
      beta.push_back(b);
    }

    if (k == capacity) {
      capacity = std::min(hard_cap, capacity * 2);
      V.conservativeResize(Eigen::NoChange, capacity);
    }
    V.col(k) = w / b;
  }

  const int got = static_cast<int>(ritz.values.size());
  MatrixXd X = V.leftCols(k) * ritz.coeff;
  for (int j = 0; j < got; ++j) X.col(j) /= X.col(j).norm();

  Result r;
  r.basis_size = k;
  r.converged = converged;
  if (known_vector) {
    r.values = VectorXd(got + 1);
    r.vectors = MatrixXd(n, got + 1);
    r.values[0] = known_value;
    r.vectors.col(0) = *known_vector;
    r.values.tail(got) = ritz.values;
    r.vectors.rightCols(got) = X;
  } else {
    r.values = ritz.values;
    r.vectors = X;
  }
  fix_signs(r.vectors);
  return r;
}

}  // namespace mdc::eigs
