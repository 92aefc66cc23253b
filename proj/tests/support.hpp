#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <vector>

#include "mdc/markov.hpp"
#include "mdc/meld.hpp"
#include "mdc/rng.hpp"
#include "mdc/types.hpp"

// Independent oracles used across suites. Everything here recomputes from
// definitions (powered matrices, explicit sums) rather than calling the
// code paths under test.
namespace support {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// Diffusion distance straight from the definition: the l2(1/pi)-weighted
/// distance between rows i and j of P^t, with P^t formed by repeated squaring.
inline double powered_row_distance(const MatrixXd& Pt, const VectorXd& pi,
                                   int i, int j) {
  double s = 0.0;
  for (int u = 0; u < Pt.cols(); ++u) {
    const double d = Pt(i, u) - Pt(j, u);
    s += d * d / pi[u];
  }
  return std::sqrt(s);
}

/// Entropy by literal formula.
inline double entropy_literal(const VectorXi& labels) {
  std::map<int, long long> sizes;
  for (int i = 0; i < labels.size(); ++i) ++sizes[labels[i]];
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (const auto& [lab, s] : sizes) h -= (s / n) * std::log(s / n);
  return h;
}

/// Mutual information by the literal double sum over the contingency table.
inline double mutual_information_literal(const VectorXi& a, const VectorXi& b) {
  std::map<int, long long> na, nb;
  std::map<std::pair<int, int>, long long> nab;
  for (int i = 0; i < a.size(); ++i) {
    ++na[a[i]];
    ++nb[b[i]];
    ++nab[{a[i], b[i]}];
  }
  const double n = static_cast<double>(a.size());
  double mi = 0.0;
  for (const auto& [key, c] : nab) {
    const double pij = c / n;
    const double pi_ = na[key.first] / n;
    const double pj = nb[key.second] / n;
    mi += pij * std::log(pij / (pi_ * pj));
  }
  return mi;
}

inline double vi_literal(const VectorXi& a, const VectorXi& b) {
  return entropy_literal(a) + entropy_literal(b) -
         2.0 * mutual_information_literal(a, b);
}

/// c_u from its printed definition, for one row u = Pt(i,:) - Sinf(i,:).
inline double c_u_literal(const MatrixXd& Pt, const MatrixXd& Sinf, int i) {
  const int n = static_cast<int>(Pt.cols());
  double l2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double v = Pt(i, j) - Sinf(i, j);
    l2 += v * v;
  }
  l2 = std::sqrt(l2);
  if (l2 == 0.0) return 1.0;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double v = std::abs(Pt(i, j) - Sinf(i, j));
    const double d = v / l2 - 1.0 / std::sqrt(static_cast<double>(n));
    acc += d * d;
  }
  return 1.0 / (1.0 - 0.5 * acc);
}

/// Random dense symmetric weights with positive diagonal; the resulting
/// chain is reversible, irreducible and aperiodic.
inline MatrixXd random_reversible_weights(int n, mdc::Rng& rng) {
  MatrixXd W(n, n);
  for (int i = 0; i < n; ++i) {
    W(i, i) = 0.2 + rng.uniform();
    for (int j = i + 1; j < n; ++j) {
      const double w = 0.05 + rng.uniform();
      W(i, j) = W(j, i) = w;
    }
  }
  return W;
}

/// Random clustering of n points into K nonempty clusters, labels 1..K.
inline mdc::Clustering random_clustering(int n, int K, mdc::Rng& rng) {
  mdc::Clustering c;
  c.K = K;
  c.labels.resize(n);
  // Guarantee nonempty clusters, then fill uniformly.
  std::vector<int> slots(n);
  for (int i = 0; i < n; ++i) slots[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(slots[i], slots[rng.uniform_int(i + 1)]);
  for (int k = 0; k < K; ++k) c.labels[slots[k]] = k + 1;
  for (int i = K; i < n; ++i) c.labels[slots[i]] = 1 + rng.uniform_int(K);
  c.modes.assign(K, -1);
  for (int i = 0; i < n; ++i) {
    const int k = c.labels[i] - 1;
    if (c.modes[k] < 0) c.modes[k] = i;
  }
  return c;
}

/// Random label vector with up to max_labels values (clusters may be empty
/// before relabeling; used by the metric fuzz where only partitions matter).
inline VectorXi random_labels(int n, int max_labels, mdc::Rng& rng) {
  VectorXi v(n);
  for (int i = 0; i < n; ++i) v[i] = 1 + rng.uniform_int(max_labels);
  return v;
}

}  // namespace support
