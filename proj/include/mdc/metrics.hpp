#pragma once

#include <optional>
#include <vector>

#include "mdc/types.hpp"

namespace mdc {

/// Nonzero joint counts of two label vectors plus their marginals. Labels may
/// be arbitrary integers; rows/columns are indexed by first appearance.
struct ContingencyTable {
  struct Cell {
    int row, col;
    long long count;
  };
  std::vector<Cell> cells;
  std::vector<long long> row_marginals;
  std::vector<long long> col_marginals;
  long long total = 0;
};

ContingencyTable contingency(const VectorXi& a, const VectorXi& b);

/// Natural-log entropy of a partition; 0 log 0 := 0.
double entropy(const VectorXi& labels);
inline double entropy(const Clustering& c) { return entropy(c.labels); }

/// Variation of information computed as the sum of the two conditional
/// entropies; exactly zero for identical partitions and never negative.
double vi(const VectorXi& a, const VectorXi& b);
inline double vi(const Clustering& a, const Clustering& b) {
  return vi(a.labels, b.labels);
}

/// Natural-log mutual information, derived as (H + H' - VI) / 2 so the
/// identities I(C,C) = H(C) and VI = H + H' - 2I hold exactly.
double mutual_information(const VectorXi& a, const VectorXi& b);
inline double mutual_information(const Clustering& a, const Clustering& b) {
  return mutual_information(a.labels, b.labels);
}

/// sqrt(I^2 / (H H')), clamped to [0,1]; empty when either entropy is zero.
std::optional<double> nmi(const VectorXi& a, const VectorXi& b);
inline std::optional<double> nmi(const Clustering& a, const Clustering& b) {
  return nmi(a.labels, b.labels);
}

}  // namespace mdc
