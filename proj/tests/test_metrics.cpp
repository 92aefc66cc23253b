#include <doctest.h>

#include <cmath>

#include "mdc/metrics.hpp"
#include "mdc/rng.hpp"
#include "support.hpp"

using namespace mdc;

namespace {

VectorXi labels_of(std::initializer_list<int> v) {
  VectorXi out(static_cast<int>(v.size()));
  int i = 0;
  for (int x : v) out[i++] = x;
  return out;
}

// Trapezoid-family label vectors on n = 4q points.
VectorXi trapezoid_labels(int q, int level) {
  VectorXi v(4 * q);
  for (int i = 0; i < 4 * q; ++i) {
    const int block = i / q;  // 0..3
    if (level == 1) v[i] = block + 1;
    if (level == 2) v[i] = block <= 1 ? 1 : block + 1;  // {12, 3, 4}
    if (level == 3) v[i] = block <= 1 ? 1 : 2;          // {12, 34}
  }
  return v;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("entropy basics") {
  CHECK(entropy(labels_of({1, 1, 1, 1})) == 0.0);
  CHECK(entropy(labels_of({1, 1, 2, 2})) == doctest::Approx(std::log(2)).epsilon(1e-14));
  VectorXi singletons(8);
  for (int i = 0; i < 8; ++i) singletons[i] = i + 1;
  CHECK(entropy(singletons) == doctest::Approx(std::log(8)).epsilon(1e-14));
  // singletons maximize entropy over random partitions of the same n
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    auto v = support::random_labels(8, 5, rng);
    CHECK(entropy(v) <= entropy(singletons) + 1e-12);
  }
}

TEST_CASE("mutual information identities") {
  const VectorXi a = labels_of({1, 1, 2, 2});
  const VectorXi b = labels_of({1, 2, 1, 2});
  CHECK(mutual_information(a, a) == entropy(a));  // exact by construction
  CHECK(mutual_information(a, b) == 0.0);         // independent pair
  CHECK(mutual_information(a, b) == mutual_information(b, a));
}

TEST_CASE("vi examples") {
  const VectorXi a = labels_of({1, 1, 2, 2});
  const VectorXi b = labels_of({1, 2, 1, 2});
  CHECK(vi(a, a) == 0.0);
  CHECK(vi(a, b) == doctest::Approx(2 * std::log(2)).epsilon(1e-14));

  const VectorXi c1 = trapezoid_labels(3, 1);
  const VectorXi c2 = trapezoid_labels(3, 2);
  const VectorXi c3 = trapezoid_labels(3, 3);
  CHECK(std::abs(vi(c1, c2) - 0.5 * std::log(2)) < 1e-12);
  CHECK(std::abs(vi(c1, c3) - std::log(2)) < 1e-12);
  CHECK(std::abs(vi(c2, c3) - 0.5 * std::log(2)) < 1e-12);
}

TEST_CASE("vi agrees with the literal H + H' - 2I route") {
  Rng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rng.uniform_int(63);
    const auto a = support::random_labels(n, 1 + rng.uniform_int(8), rng);
    const auto b = support::random_labels(n, 1 + rng.uniform_int(8), rng);
    CHECK(std::abs(vi(a, b) - support::vi_literal(a, b)) < 1e-12);
    CHECK(std::abs(mutual_information(a, b) -
                   support::mutual_information_literal(a, b)) < 1e-12);
  }
}

TEST_CASE("nmi basics") {
  const VectorXi a = labels_of({1, 1, 2, 2});
  const VectorXi b = labels_of({1, 2, 1, 2});
  CHECK(nmi(a, a).value() == 1.0);
  CHECK(nmi(a, b).value() == 0.0);
  CHECK_FALSE(nmi(labels_of({1, 1, 1}), a.head(3)).has_value());
}

TEST_CASE("vi metric axioms on random partitions") {
  Rng rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + rng.uniform_int(63);
    const auto a = support::random_labels(n, 1 + rng.uniform_int(6), rng);
    const auto b = support::random_labels(n, 1 + rng.uniform_int(6), rng);
    const auto c = support::random_labels(n, 1 + rng.uniform_int(6), rng);
    const double ab = vi(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab == vi(b, a));
    CHECK(vi(a, c) <= ab + vi(b, c) + 1e-12);
    auto x = nmi(a, b);
    if (x) {
      CHECK(*x >= 0.0);
      CHECK(*x <= 1.0);
    }
  }
}

TEST_CASE("contingency marginals") {
  const VectorXi a = labels_of({1, 1, 2, 2, 3});
  const VectorXi b = labels_of({4, 4, 4, 7, 7});
  const auto t = contingency(a, b);
  CHECK(t.total == 5);
  long long sum = 0;
  for (const auto& cell : t.cells) sum += cell.count;
  CHECK(sum == 5);
  CHECK(t.row_marginals.size() == 3);
  CHECK(t.col_marginals.size() == 2);
  CHECK(t.row_marginals[0] + t.row_marginals[1] + t.row_marginals[2] == 5);
}

}  // TEST_SUITE
