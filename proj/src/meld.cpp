#include "mdc/meld.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "mdc/error.hpp"
#include "mdc/geometry.hpp"
#include "mdc/kernels.hpp"

namespace mdc {

namespace {

constexpr double kPrimitivityTol = 1e-10;

std::vector<std::vector<int>> cluster_members(const Clustering& c) {
  std::vector<std::vector<int>> members(c.K);
  for (int i = 0; i < c.labels.size(); ++i) {
    const int lab = c.labels[i];
    if (lab < 1 || lab > c.K) fail(ErrorCode::invalid_clustering, "label out of range");
    members[lab - 1].push_back(i);
  }
  for (const auto& m : members)
    if (m.empty()) fail(ErrorCode::invalid_clustering, "empty cluster");
  return members;
}

// Stationary distribution of a small row-stochastic block: left null vector
// of (S - I) with the normalization sum = 1 replacing the last equation.
VectorXd block_stationary(const MatrixXd& S) {
  const int k = static_cast<int>(S.rows());
  if (k == 1) return VectorXd::Ones(1);
  MatrixXd A = S.transpose() - MatrixXd::Identity(k, k);
  A.row(k - 1).setOnes();
  VectorXd b = VectorXd::Zero(k);
  b[k - 1] = 1.0;
  Eigen::PartialPivLU<MatrixXd> lu(A);
  VectorXd s = lu.solve(b);
  const double resid = (A * s - b).norm();
  if (!s.allFinite() || resid > 1e-6)
    fail(ErrorCode::singular_complement,
         "stochastic complement block has no unique stationary distribution");
  return s;
}

double inf_norm_real(const MatrixXd& A) {
  double m = 0.0;
  for (int i = 0; i < A.rows(); ++i) m = std::max(m, A.row(i).cwiseAbs().sum());
  return m;
}

double inf_norm_cplx(const Eigen::MatrixXcd& A) {
  double m = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols(); ++j) s += std::abs(A(i, j));
    m = std::max(m, s);
  }
  return m;
}

}  // namespace

StochasticComplement stochastic_complement(const MatrixXd& P,
                                           const Clustering& clustering) {
  const int n = static_cast<int>(P.rows());
  if (clustering.labels.size() != n)
    fail(ErrorCode::invalid_clustering, "clustering size does not match P");
  if (clustering.K < 2)
    fail(ErrorCode::invalid_clustering, "need at least two clusters");
  const auto members = cluster_members(clustering);

  StochasticComplement sc;
  sc.perm.reserve(n);
  sc.block_starts.push_back(0);
  for (const auto& mem : members) {
    sc.perm.insert(sc.perm.end(), mem.begin(), mem.end());
    sc.block_starts.push_back(static_cast<int>(sc.perm.size()));
  }

  MatrixXd Pp(n, n);  // P in block order
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Pp(i, j) = P(sc.perm[i], sc.perm[j]);

  sc.S = MatrixXd::Zero(n, n);
  sc.S_infinity = MatrixXd::Zero(n, n);

  for (int k = 0; k < clustering.K; ++k) {
    const int lo = sc.block_starts[k];
    const int hi = sc.block_starts[k + 1];
    const int nk = hi - lo;
    const int rest = n - nk;

    MatrixXd Skk;
    if (rest == 0) {
      Skk = Pp.block(lo, lo, nk, nk);
    } else {
      MatrixXd Pk(rest, rest);   // complement principal submatrix
      MatrixXd Pstar_k(rest, nk);
      MatrixXd Pk_star(nk, rest);
      int r = 0;
      for (int i = 0; i < n; ++i) {
        if (i >= lo && i < hi) continue;
        int c = 0;
        for (int j = 0; j < n; ++j) {
          if (j >= lo && j < hi) continue;
          Pk(r, c++) = Pp(i, j);
        }
        for (int j = 0; j < nk; ++j) Pstar_k(r, j) = Pp(i, lo + j);
        ++r;
      }
      for (int i = 0; i < nk; ++i) {
        int c = 0;
        for (int j = 0; j < n; ++j) {
          if (j >= lo && j < hi) continue;
          Pk_star(i, c++) = Pp(lo + i, j);
        }
      }
      if (Pk_star.cwiseAbs().maxCoeff() == 0.0 ||
          Pstar_k.cwiseAbs().maxCoeff() == 0.0) {
        // Decoupled block: the correction term vanishes identically and
        // (I - P_k) may legitimately be singular.
        Skk = Pp.block(lo, lo, nk, nk);
      } else {
        MatrixXd A = MatrixXd::Identity(rest, rest) - Pk;
        Eigen::PartialPivLU<MatrixXd> lu(A);
        MatrixXd Y = lu.solve(Pstar_k);  // (I - P_k)^{-1} P_{*k}, no explicit inverse
        if (!Y.allFinite() || (A * Y - Pstar_k).cwiseAbs().maxCoeff() > 1e-8)
          fail(ErrorCode::singular_complement,
               "I - P_k is numerically singular for cluster " + std::to_string(k + 1));
        Skk = Pp.block(lo, lo, nk, nk) + Pk_star * Y;
      }
    }
    sc.S.block(lo, lo, nk, nk) = Skk;

    // Primitivity screen: a unique unit eigenvalue and nothing else on the
    // unit circle. Downstream theorems assume it; analysis continues anyway.
    if (nk > 1) {
      Eigen::EigenSolver<MatrixXd> es(Skk);
      int near_unit = 0;
      for (int i = 0; i < nk; ++i)
        if (std::abs(es.eigenvalues()[i]) >= 1.0 - kPrimitivityTol) ++near_unit;
      if (near_unit != 1) sc.non_primitive = true;
    }

    const VectorXd s = block_stationary(Skk);
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) sc.S_infinity(lo + i, lo + j) = s[j];
  }
  return sc;
}

GeometricConstants geometric_constants(const MatrixXd& P,
                                       const StochasticComplement& sc) {
  const int n = static_cast<int>(P.rows());
  const int K = static_cast<int>(sc.block_starts.size()) - 1;

  MatrixXd Pp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Pp(i, j) = P(sc.perm[i], sc.perm[j]);

  GeometricConstants g;
  g.non_primitive = sc.non_primitive;
  g.delta = inf_norm_real(Pp - sc.S);

  // Identity delta = 2 max_k ||P_{k*}||_inf, kept as a diagnostic.
  double max_out = 0.0;
  for (int k = 0; k < K; ++k) {
    const int lo = sc.block_starts[k];
    const int hi = sc.block_starts[k + 1];
    for (int i = lo; i < hi; ++i) {
      double row_out = 0.0;
      for (int j = 0; j < n; ++j)
        if (j < lo || j >= hi) row_out += std::abs(Pp(i, j));
      max_out = std::max(max_out, row_out);
    }
  }
  g.delta_identity_gap = std::abs(g.delta - 2.0 * max_out);

  // Block-diagonal diagonalizer: the infinity norms of Z and Z^{-1} are the
  // worst block norms, so blocks never need assembling into an n x n matrix.
  g.lambda_next = 0.0;
  double z_norm = 1.0;     // singleton blocks contribute 1
  double zinv_norm = 1.0;
  bool defective = false;
  for (int k = 0; k < K; ++k) {
    const int lo = sc.block_starts[k];
    const int nk = sc.block_starts[k + 1] - lo;
    if (nk == 1) continue;
    const MatrixXd Skk = sc.S.block(lo, lo, nk, nk);
    Eigen::EigenSolver<MatrixXd> es(Skk);
    if (es.info() != Eigen::Success)
      fail(ErrorCode::eigensolver_failure, "block eigendecomposition failed");
    std::vector<int> order(nk);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    g.lambda_next = std::max(g.lambda_next, std::abs(es.eigenvalues()[order[1]]));

    Eigen::MatrixXcd Zk(nk, nk);
    for (int c = 0; c < nk; ++c) {
      Eigen::VectorXcd v = es.eigenvectors().col(order[c]);
      Zk.col(c) = v / v.norm();  // unit Euclidean columns pin the scaling
    }
    // Defective within tolerance: the normalized eigenvector matrix is rank
    // deficient relative to its largest pivot.
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(Zk);
    if (lu.rank() < nk) {
      defective = true;
      continue;
    }
    const Eigen::MatrixXcd Zk_inv = lu.inverse();
    if (!Zk_inv.allFinite()) {
      defective = true;
      continue;
    }
    z_norm = std::max(z_norm, inf_norm_cplx(Zk));
    zinv_norm = std::max(zinv_norm, inf_norm_cplx(Zk_inv));
  }

  if (defective) {
    g.kappa_finite = false;
    g.kappa = std::numeric_limits<double>::infinity();
  } else {
    g.kappa = z_norm * zinv_norm;
  }
  // lambda_next may sit at or above 1 on non-primitive blocks; the interval
  // then reports empty/degenerate downstream.
  return g;
}

GeometricConstants geometric_constants(const MatrixXd& P,
                                       const Clustering& clustering) {
  return geometric_constants(P, stochastic_complement(P, clustering));
}

EpsilonInterval epsilon_interval(const GeometricConstants& c, double epsilon) {
  if (epsilon <= 0.0) fail(ErrorCode::usage, "epsilon must be positive");
  EpsilonInterval iv;
  iv.epsilon = epsilon;
  if (!c.kappa_finite) {
    iv.lower = std::numeric_limits<double>::infinity();
    iv.upper = 0.0;
    iv.empty = true;
    return iv;
  }
  if (c.lambda_next <= 1e-12) {
    iv.lower = 0.0;  // rank-one blocks report round-off-size eigenvalues
  } else if (c.lambda_next >= 1.0) {
    iv.lower = std::numeric_limits<double>::infinity();
  } else {
    iv.lower = std::log(2.0 * c.kappa / epsilon) / std::log(1.0 / c.lambda_next);
  }
  iv.upper = c.delta == 0.0 ? std::numeric_limits<double>::infinity()
                            : epsilon / (2.0 * c.delta);
  iv.empty = !(iv.lower <= iv.upper);
  return iv;
}

double gamma_stat(const MatrixXd& Pt, const MatrixXd& S_infinity) {
  const int n = static_cast<int>(Pt.rows());
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  double g = 1.0;
  for (int i = 0; i < n; ++i) {
    double l1 = 0.0, l2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = Pt(i, j) - S_infinity(i, j);
      l1 += std::abs(v);
      l2 += v * v;
    }
    if (l1 == 0.0) continue;  // exactly-zero row: c_u = 1 by convention
    g = std::max(g, sqrt_n * std::sqrt(l2) / l1);
  }
  return std::min(g, sqrt_n);
}

MatrixXd matrix_power(const MatrixXd& A, long long t) {
  const int n = static_cast<int>(A.rows());
  if (t < 0) fail(ErrorCode::usage, "matrix power wants t >= 0");
  MatrixXd result = MatrixXd::Identity(n, n);
  MatrixXd base = A;
  while (t > 0) {
    if (t & 1) result = result * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return result;
}

double gamma_t(const MatrixXd& P, const MatrixXd& S_infinity, long long t) {
  return gamma_stat(matrix_power(P, t), S_infinity);
}

SeparationProfile separation_profile(const MarkovModel& model,
                                     const Clustering& clustering, double t) {
  if (clustering.K < 2)
    fail(ErrorCode::invalid_clustering,
         "between-cluster distance is undefined for K = 1");
  if (clustering.labels.size() != model.n)
    fail(ErrorCode::invalid_clustering, "clustering size does not match model");
  const MatrixXd coords = embedding_columns(model, t);
  const int n = model.n;

  std::vector<double> in_rows(n, 0.0);
  std::vector<double> btw_rows(n, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double in_max = 0.0;
    double btw_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = kernels::squared_point_dist(coords, i, j);
      if (clustering.labels[i] == clustering.labels[j])
        in_max = std::max(in_max, d);
      else
        btw_min = std::min(btw_min, d);
    }
    in_rows[i] = in_max;
    btw_rows[i] = btw_min;
  }
  SeparationProfile prof;
  double in_sq = 0.0, btw_sq = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    in_sq = std::max(in_sq, in_rows[i]);
    btw_sq = std::min(btw_sq, btw_rows[i]);
  }
  prof.d_in = std::sqrt(in_sq);
  prof.d_btw = std::sqrt(btw_sq);
  prof.ratio = prof.d_btw > 0.0
                   ? prof.d_in / prof.d_btw
                   : std::numeric_limits<double>::infinity();
  return prof;
}

bool epsilon_separable(const SeparationProfile& profile, double epsilon, int n) {
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  if (epsilon <= 0.0 || epsilon >= inv_sqrt_n)
    fail(ErrorCode::usage, "epsilon must lie in (0, 1/sqrt(n))");
  return profile.ratio <= epsilon / (inv_sqrt_n - epsilon);
}

std::vector<MeyerRecord> verify_meyer(const MarkovModel& model,
                                      const Clustering& clustering,
                                      const std::vector<long long>& times) {
  const MatrixXd P = model.P_dense();
  const StochasticComplement sc = stochastic_complement(P, clustering);
  const GeometricConstants g = geometric_constants(P, sc);
  const int n = model.n;

  MatrixXd Pp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Pp(i, j) = P(sc.perm[i], sc.perm[j]);

  std::vector<MeyerRecord> records;
  for (long long t : times) {
    const MatrixXd Pt = matrix_power(Pp, t);
    MeyerRecord rec;
    rec.t = static_cast<double>(t);
    rec.lhs = inf_norm_real(Pt - sc.S_infinity);
    const double lam_pow = t == 0 ? 1.0 : std::pow(g.lambda_next, static_cast<double>(t));
    rec.rhs = g.delta * static_cast<double>(t) + g.kappa * lam_pow;
    rec.holds = rec.lhs <= rec.rhs + 1e-12;
    records.push_back(rec);
  }
  return records;
}

BoundsRecord diffusion_bounds(const MarkovModel& model,
                              const Clustering& clustering, long long t) {
  const MatrixXd P = model.P_dense();
  const StochasticComplement sc = stochastic_complement(P, clustering);
  const GeometricConstants g = geometric_constants(P, sc);
  const int n = model.n;

  MatrixXd Pp(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Pp(i, j) = P(sc.perm[i], sc.perm[j]);
  const MatrixXd Pt = matrix_power(Pp, t);

  BoundsRecord rec;
  rec.t = static_cast<double>(t);
  rec.gamma = gamma_stat(Pt, sc.S_infinity);

  // min_w ||s_inf(w,:)||_{l2(1/pi)} with pi in block order
  double min_norm = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = sc.S_infinity(i, j);
      if (v != 0.0) s += v * v / model.pi[sc.perm[j]];
    }
    min_norm = std::min(min_norm, std::sqrt(s));
  }
  rec.min_row_norm = min_norm;

  // Row error in l2(1/pi): ||p_t(x,:) - s_inf(x,:)||_1 <= delta t + kappa l^t
  // (Meyer), ||.||_2 <= (gamma/sqrt n)||.||_1 by the gamma statistic, and
  // ||.||_{l2(1/pi)} <= ||.||_2 / sqrt(pi_min). Between-cluster rows of
  // S_infinity have disjoint supports, so their l2(1/pi) separation is at
  // least sqrt(2) times the smallest row norm.
  const double lam_pow = t == 0 ? 1.0 : std::pow(g.lambda_next, static_cast<double>(t));
  const double err =
      (2.0 * rec.gamma / std::sqrt(static_cast<double>(n) * model.pi_min)) *
      (g.delta * static_cast<double>(t) + g.kappa * lam_pow);
  rec.in_upper = err;
  rec.btw_lower = std::sqrt(2.0) * min_norm - err;

  const SeparationProfile prof =
      separation_profile(model, clustering, static_cast<double>(t));
  rec.d_in = prof.d_in;
  rec.d_btw = prof.d_btw;
  return rec;
}

StabilityOrder stability_compare(const GeometricConstants& a,
                                 const GeometricConstants& b, double epsilon) {
  const EpsilonInterval ia = epsilon_interval(a, epsilon);
  const EpsilonInterval ib = epsilon_interval(b, epsilon);
  if (ia.empty || ib.empty) return StabilityOrder::incomparable;
  const double la = ia.upper - ia.lower;
  const double lb = ib.upper - ib.lower;
  if (la == lb) return StabilityOrder::equal;
  if (std::isinf(la) && std::isinf(lb)) return StabilityOrder::equal;
  return la > lb ? StabilityOrder::more_stable : StabilityOrder::less_stable;
}

double relative_pointwise_distance(const MarkovModel& model, long long t) {
  const MatrixXd Pt = matrix_power(model.P_dense(), t);
  const int n = model.n;
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m = std::max(m, std::abs(Pt(i, j) - model.pi[j]) / model.pi[j]);
  return m;
}

}  // namespace mdc
