#include <doctest.h>

#include "mdc/kernels.hpp"
#include "mdc/rng.hpp"
#include "support.hpp"

using namespace mdc;
namespace k = mdc::kernels;

namespace {

MatrixXd random_points(int n, int d, Rng& rng) {
  MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = rng.normal();
  return pts;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("parallel kernels match their serial references exactly") {
  Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 40 + rng.uniform_int(80);
    const MatrixXd pts = random_points(n, 3, rng);

    CHECK((k::pairwise_sq_dist(pts).array() == k::pairwise_sq_dist_serial(pts).array()).all());

    const int kk = 5 + rng.uniform_int(10);
    const auto a = k::knn_search(pts, kk);
    const auto b = k::knn_search_serial(pts, kk);
    CHECK((a.idx.array() == b.idx.array()).all());
    CHECK((a.sq_dist.array() == b.sq_dist.array()).all());

    VectorXd x(n), y1(n), y2(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    const MatrixXd A = random_points(n, n, rng);
    k::dense_matvec(A, x.data(), y1.data());
    k::dense_matvec_serial(A, x.data(), y2.data());
    CHECK((y1.array() == y2.array()).all());
  }
}

TEST_CASE("pruned nearest search equals the brute scan, ties included") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 30 + rng.uniform_int(60);
    const int m = 2 + rng.uniform_int(4);
    MatrixXd coords = random_points(m, n, rng);  // one point per column
    // Inject exact duplicates to force distance ties.
    for (int i = 0; i < n / 5; ++i)
      coords.col(rng.uniform_int(n)) = coords.col(rng.uniform_int(n));

    std::vector<int> order, rank;
    k::coordinate_order(coords, order, rank);
    VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform();

    for (int x = 0; x < n; ++x) {
      auto pred = [&](int y) { return p[y] >= p[x] && y != x; };
      const auto pruned = k::nearest_admissible(coords, order, rank, x, pred);
      const auto brute = k::nearest_admissible_serial(coords, x, pred);
      CHECK(pruned.first == brute.first);
      CHECK(pruned.second == brute.second);
    }
  }
}

TEST_CASE("rho scan matches serial reference") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 50 + rng.uniform_int(50);
    const MatrixXd coords = random_points(4, n, rng);  // one point per column
    VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform();
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (p[i] > p[arg]) arg = i;
    const VectorXd fast = k::rho_scan(coords, p, arg);
    const VectorXd slow = k::rho_scan_serial(coords, p, arg);
    CHECK((fast.array() == slow.array()).all());
  }
}

TEST_CASE("max point distance reductions agree") {
  Rng rng(31);
  const MatrixXd coords = random_points(5, 200, rng);
  for (int x = 0; x < 200; x += 17)
    CHECK(k::max_point_sq_dist(coords, x) == k::max_point_sq_dist_serial(coords, x));
}

}  // TEST_SUITE

TEST_SUITE("kernels") {
TEST_CASE("symmetric matvec matches the general one on symmetric input") {
  Rng rng(37);
  for (int n : {5, 63, 256, 301, 750}) {
    MatrixXd A = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A(i, j) = A(j, i) = rng.normal();
    VectorXd x(n), y1(n), y2(n), y3(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    k::dense_symmetric_matvec(A, x.data(), y1.data());
    k::dense_symmetric_matvec_serial(A, x.data(), y2.data());
    k::dense_matvec(A, x.data(), y3.data());
    CHECK((y1.array() == y2.array()).all());
    CHECK(((y1 - y3).cwiseAbs().array() < 1e-12 * (1 + y3.cwiseAbs().array())).all());
  }
}
}
