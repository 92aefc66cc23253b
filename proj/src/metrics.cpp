#include "mdc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "mdc/error.hpp"

namespace mdc {

namespace {

std::unordered_map<int, int> index_labels(const VectorXi& v,
                                          std::vector<long long>& sizes) {
  std::unordered_map<int, int> ids;
  for (int i = 0; i < v.size(); ++i) {
    auto [it, inserted] = ids.emplace(v[i], static_cast<int>(ids.size()));
    if (inserted) sizes.push_back(0);
    ++sizes[it->second];
  }
  return ids;
}

}  // namespace

ContingencyTable contingency(const VectorXi& a, const VectorXi& b) {
  if (a.size() != b.size() || a.size() == 0)
    fail(ErrorCode::usage, "label vectors must be nonempty and equally long");
  ContingencyTable t;
  auto ra = index_labels(a, t.row_marginals);
  auto rb = index_labels(b, t.col_marginals);
  std::map<std::pair<int, int>, long long> counts;
  for (int i = 0; i < a.size(); ++i)
    ++counts[{ra.at(a[i]), rb.at(b[i])}];
  t.cells.reserve(counts.size());
  for (const auto& [key, c] : counts)
    t.cells.push_back({key.first, key.second, c});
  t.total = a.size();
  return t;
}

double entropy(const VectorXi& labels) {
  std::vector<long long> sizes;
  index_labels(labels, sizes);
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (long long s : sizes)
    if (s > 0) h -= (s / n) * std::log(s / n);
  return h;
}

double vi(const VectorXi& a, const VectorXi& b) {
  const ContingencyTable t = contingency(a, b);
  const double n = static_cast<double>(t.total);
  std::vector<double> terms;
  terms.reserve(t.cells.size());
  for (const auto& cell : t.cells) {
    const double nij = static_cast<double>(cell.count);
    // log(n_i / n_ij) + log(m_j / n_ij), both nonnegative
    terms.push_back((nij / n) * (std::log(t.row_marginals[cell.row] / nij) +
                                 std::log(t.col_marginals[cell.col] / nij)));
  }
  // summation in sorted order makes vi(a,b) and vi(b,a) bitwise equal
  std::sort(terms.begin(), terms.end());
  double v = 0.0;
  for (double term : terms) v += term;
  return v;
}

double mutual_information(const VectorXi& a, const VectorXi& b) {
  return 0.5 * (entropy(a) + entropy(b) - vi(a, b));
}

std::optional<double> nmi(const VectorXi& a, const VectorXi& b) {
  const double ha = entropy(a);
  const double hb = entropy(b);
  if (ha == 0.0 || hb == 0.0) return std::nullopt;
  const double i = 0.5 * (ha + hb - vi(a, b));
  const double value = std::sqrt((i * i) / (ha * hb));
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace mdc
