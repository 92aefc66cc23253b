#include <doctest.h>

#include <cmath>

#include "mdc/error.hpp"
#include "mdc/markov.hpp"
#include "mdc/meld.hpp"
#include "mdc/geometry.hpp"
#include "mdc/rng.hpp"
#include "mdc/synth.hpp"
#include "support.hpp"

using namespace mdc;

namespace {

// 4-state chain with two 2-state blocks and 0.05 off-block entries.
MarkovModel toy4() {
  MatrixXd W(4, 4);
  W << .45, .45, .05, .05,
       .45, .45, .05, .05,
       .05, .05, .45, .45,
       .05, .05, .45, .45;
  return markov_from_weights(W, 4);
}

Clustering pair_clustering() {
  Clustering c;
  c.K = 2;
  c.labels = VectorXi(4);
  c.labels << 1, 1, 2, 2;
  c.modes = {0, 2};
  return c;
}

Clustering singleton_clustering(int n) {
  Clustering c;
  c.K = n;
  c.labels = VectorXi(n);
  for (int i = 0; i < n; ++i) c.labels[i] = i + 1;
  for (int i = 0; i < n; ++i) c.modes.push_back(i);
  return c;
}

}  // namespace

TEST_SUITE("meld") {

TEST_CASE("hand-checked stochastic complement of the 4-state toy") {
  const auto model = toy4();
  const auto sc = stochastic_complement(model.P_dense(), pair_clustering());
  for (int b : {0, 2})
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(sc.S(b + i, b + j) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sc.S.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  // rows stochastic, S_infinity rows equal the block stationaries
  for (int i = 0; i < 4; ++i) {
    CHECK(sc.S.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sc.S_infinity.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_FALSE(sc.non_primitive);
}

TEST_CASE("block-diagonal P has S = P and delta = 0") {
  MatrixXd W = MatrixXd::Zero(5, 5);
  W.block(0, 0, 2, 2) << 1, 1, 1, 1;
  W.block(2, 2, 3, 3) << 1, 1, 1, 1, 1, 1, 1, 1, 1;
  // connect nothing; bypass the connectivity check by building pieces by hand
  MatrixXd P = W;
  for (int i = 0; i < 5; ++i) P.row(i) /= P.row(i).sum();
  Clustering c;
  c.K = 2;
  c.labels = VectorXi(5);
  c.labels << 1, 1, 2, 2, 2;
  c.modes = {0, 2};
  const auto sc = stochastic_complement(P, c);
  CHECK((sc.S - P).cwiseAbs().maxCoeff() < 1e-15);

  GeometricConstants g;
  SUBCASE("constants") {
    const auto sc2 = stochastic_complement(P, c);
    g = geometric_constants(P, sc2);
    CHECK(g.delta == 0.0);
    CHECK(g.lambda_next < 1e-12);  // rank-one blocks
    const auto iv = epsilon_interval(g, 0.05);
    CHECK(iv.lower == 0.0);
    CHECK(std::isinf(iv.upper));
    CHECK_FALSE(iv.empty);
  }
}

TEST_CASE("geometric constants of the toy") {
  const auto model = toy4();
  const MatrixXd P = model.P_dense();
  const auto g = geometric_constants(P, pair_clustering());
  CHECK(g.delta == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(g.lambda_next < 1e-12);
  CHECK(g.delta_identity_gap < 1e-8);
  CHECK(g.kappa >= 1.0);

  const auto iv = epsilon_interval(g, 0.1);
  CHECK(iv.lower == 0.0);
  CHECK(iv.upper == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_FALSE(iv.empty);
}

TEST_CASE("interval formula spot check") {
  GeometricConstants g;
  g.kappa = 1.0;
  g.lambda_next = 0.5;
  g.delta = 0.01;
  const auto iv = epsilon_interval(g, 0.1);
  CHECK(iv.lower == doctest::Approx(std::log(20.0) / std::log(2.0)).epsilon(1e-12));
  CHECK(iv.upper == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_FALSE(iv.empty);
  // lower decreasing and upper increasing in epsilon
  const auto iv2 = epsilon_interval(g, 0.2);
  CHECK(iv2.lower <= iv.lower);
  CHECK(iv2.upper >= iv.upper);
}

TEST_CASE("singleton clustering gives S = I and kappa = 1") {
  const auto model = toy4();
  const MatrixXd P = model.P_dense();
  const auto sc = stochastic_complement(P, singleton_clustering(4));
  CHECK((sc.S - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  const auto g = geometric_constants(P, sc);
  CHECK(g.kappa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.lambda_next == 0.0);
}

TEST_CASE("delta never decreases under refinement") {
  Rng rng(81);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 6 + rng.uniform_int(18);
    const MatrixXd W = support::random_reversible_weights(n, rng);
    const auto model = markov_from_weights(W, n);
    const MatrixXd P = model.P_dense();

    const int K_coarse = 2 + rng.uniform_int(2);
    const auto coarse = support::random_clustering(n, K_coarse, rng);
    // refine: split each cluster into up to two pieces
    Clustering fine;
    fine.labels = VectorXi(n);
    int next = 0;
    std::vector<std::pair<int, int>> split_ids(K_coarse, {-1, -1});
    for (int i = 0; i < n; ++i) {
      const int k = coarse.labels[i] - 1;
      const int side = rng.uniform_int(2);
      auto& ids = split_ids[k];
      int& slot = side == 0 ? ids.first : ids.second;
      if (slot < 0) slot = next++;
      fine.labels[i] = slot + 1;
    }
    fine.K = next;
    fine.modes.assign(next, -1);
    for (int i = 0; i < n; ++i)
      if (fine.modes[fine.labels[i] - 1] < 0) fine.modes[fine.labels[i] - 1] = i;
    if (fine.K < 2 || fine.K == coarse.K) continue;

    const auto gc = geometric_constants(P, coarse);
    const auto gf = geometric_constants(P, fine);
    CHECK(gf.delta >= gc.delta - 1e-12);
  }
}

TEST_CASE("gamma matches the literal row statistic and stays in range") {
  const auto model = toy4();
  const MatrixXd P = model.P_dense();
  const auto sc = stochastic_complement(P, pair_clustering());
  for (long long t : {0LL, 1LL, 2LL, 7LL}) {
    const MatrixXd Pt = matrix_power(P, t);
    double literal = 1.0;
    for (int i = 0; i < 4; ++i)
      literal = std::max(literal, support::c_u_literal(Pt, sc.S_infinity, i));
    const double got = gamma_t(P, sc.S_infinity, t);
    CHECK(got == doctest::Approx(std::min(literal, 2.0)).epsilon(1e-9));
    CHECK(got >= 1.0);
    CHECK(got <= 2.0);  // sqrt(4)
  }
  // uniform-magnitude rows: P itself against its stationary projector
  CHECK(gamma_t(P, sc.S_infinity, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("meyer bound on the toy at t = 1") {
  const auto model = toy4();
  const auto recs = verify_meyer(model, pair_clustering(), {1});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].lhs == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(recs[0].rhs >= recs[0].lhs - 1e-12);
  CHECK(recs[0].holds);
}

TEST_CASE("separation profile on two far point masses") {
  Rng rng(82);
  PointCloud pc;
  pc.points.resize(8, 2);
  for (int i = 0; i < 4; ++i) {
    pc.points(i, 0) = 0.02 * rng.normal();
    pc.points(i, 1) = 0.02 * rng.normal();
    pc.points(4 + i, 0) = 5.0 + 0.02 * rng.normal();
    pc.points(4 + i, 1) = 0.02 * rng.normal();
  }
  GraphConfig cfg;
  cfg.mode = GraphMode::complete;
  cfg.sigma = 1.0;
  const auto model = build_markov(pc, cfg, 8);
  Clustering c;
  c.K = 2;
  c.labels = VectorXi(8);
  c.labels << 1, 1, 1, 1, 2, 2, 2, 2;
  c.modes = {0, 4};

  const auto prof = separation_profile(model, c, 8.0);
  CHECK(prof.ratio < 1e-3);
  CHECK(epsilon_separable(prof, 0.9 / std::sqrt(8.0), 8));

  Clustering one;
  one.K = 1;
  one.labels = VectorXi::Ones(8);
  one.modes = {0};
  CHECK_THROWS_AS(separation_profile(model, one, 1.0), Error);
}

TEST_CASE("stability comparison") {
  GeometricConstants a, b;
  a.kappa = b.kappa = 1.2;
  a.lambda_next = 0.05;
  b.lambda_next = 0.10;
  a.delta = 0.001;
  b.delta = 0.002;
  CHECK(stability_compare(a, a, 0.05) == StabilityOrder::equal);
  const auto ord = stability_compare(a, b, 0.05);
  CHECK((ord == StabilityOrder::more_stable || ord == StabilityOrder::equal));

  GeometricConstants empty = b;
  empty.kappa = std::numeric_limits<double>::infinity();
  empty.kappa_finite = false;
  CHECK(stability_compare(a, empty, 0.05) == StabilityOrder::incomparable);
}

TEST_CASE("relative pointwise distance") {
  const auto model = toy4();
  // rank-one chain: already stationary
  MatrixXd Wu = MatrixXd::Ones(4, 4);
  const auto uni = markov_from_weights(Wu, 4);
  CHECK(relative_pointwise_distance(uni, 1) < 1e-12);
  CHECK(relative_pointwise_distance(uni, 9) < 1e-12);

  MatrixXd W2(2, 2);
  W2 << .9, .1, .1, .9;
  const auto chain = markov_from_weights(W2, 2);
  CHECK(relative_pointwise_distance(chain, 1) == doctest::Approx(0.8).epsilon(1e-12));
  // bound Delta(t) <= |lambda2|^t / pi_min
  for (long long t : {1LL, 2LL, 5LL, 10LL})
    CHECK(relative_pointwise_distance(chain, t) <=
          std::pow(chain.lambda2_abs(), static_cast<double>(t)) / chain.pi_min +
              1e-12);
}

TEST_CASE("S_infinity is idempotent on random chains") {
  Rng rng(83);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 6 + rng.uniform_int(14);
    const MatrixXd W = support::random_reversible_weights(n, rng);
    const auto model = markov_from_weights(W, n);
    const auto c = support::random_clustering(n, 2 + rng.uniform_int(3), rng);
    const auto sc = stochastic_complement(model.P_dense(), c);
    CHECK((sc.S_infinity * sc.S_infinity - sc.S_infinity).cwiseAbs().maxCoeff() <
          1e-8);
    // S row-stochastic and block supported
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(sc.S.row(i).sum() - 1.0) < 1e-9);
  }
}

}  // TEST_SUITE

TEST_SUITE("meld") {
TEST_CASE("well-separated pairs: separability evidence for the coarse clustering only") {
  const auto pc = synth::gen_trapezoid(96, {1.0, 1.35, 1.9}, 7);
  GraphConfig cfg;
  cfg.mode = GraphMode::complete;
  cfg.sigma = 0.33;
  const auto model = build_markov(pc, cfg, 10);
  const MatrixXd P = model.P_dense();
  const int n = model.n;

  // coarse two-group clustering {1 u 2, 3 u 4}
  Clustering coarse;
  coarse.K = 2;
  coarse.labels.resize(n);
  for (int i = 0; i < n; ++i)
    coarse.labels[i] = (*pc.truth_labels)[i] <= 2 ? 1 : 2;
  coarse.modes = {0, 0};
  for (int i = 0; i < n; ++i) coarse.modes[coarse.labels[i] - 1] = i;

  const auto gc = geometric_constants(P, coarse);
  bool any_nonempty = false;
  const double eps_hi = 0.99 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < 60; ++i) {
    const double eps = eps_hi * std::pow(10.0, -4.0 * i / 59.0);
    if (!epsilon_interval(gc, eps).empty) any_nonempty = true;
  }
  CHECK(any_nonempty);

  // an arbitrary fine shattering has no such evidence
  Clustering junk;
  junk.K = 16;
  junk.labels.resize(n);
  for (int i = 0; i < n; ++i) junk.labels[i] = 1 + (i % 16);
  for (int k = 0; k < 16; ++k) junk.modes.push_back(k);
  const auto gj = geometric_constants(P, junk);
  bool junk_nonempty = false;
  for (int i = 0; i < 60; ++i) {
    const double eps = eps_hi * std::pow(10.0, -4.0 * i / 59.0);
    if (!epsilon_interval(gj, eps).empty) junk_nonempty = true;
  }
  CHECK_FALSE(junk_nonempty);
}

TEST_CASE("rings: Meyer bound along a sampled time grid") {
  const auto pc = synth::gen_rings3(400, 0);
  GraphConfig cfg;
  cfg.mode = GraphMode::complete;
  cfg.sigma = 0.21;
  const auto model = build_markov(pc, cfg, 10);
  Clustering three;
  three.K = 3;
  three.labels = *pc.truth_labels;
  three.modes = {0, 0, 0};
  for (int i = 0; i < 400; ++i) three.modes[three.labels[i] - 1] = i;
  const auto recs = verify_meyer(model, three, {1, 4, 16, 64, 256, 1024, 4096});
  for (const auto& r : recs) CHECK(r.holds);
}
}
