#include "mdc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mdc/error.hpp"
#include "mdc/rng.hpp"

namespace mdc::synth {

namespace {

/// Integer allocation of n by proportional shares, largest remainder first.
std::vector<int> allocate(int n, const std::vector<double>& shares) {
  const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
  const int k = static_cast<int>(shares.size());
  std::vector<int> counts(k);
  std::vector<std::pair<double, int>> rema(k);
  int used = 0;
  for (int i = 0; i < k; ++i) {
    const double exact = n * shares[i] / total;
    counts[i] = static_cast<int>(std::floor(exact));
    used += counts[i];
    rema[i] = {exact - counts[i], i};
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int r = 0; r < n - used; ++r) ++counts[rema[r].second];
  return counts;
}

}  // namespace

PointCloud gen_gaussians4(int n, uint64_t seed) {
  if (n < 8) fail(ErrorCode::usage, "gaussians4 wants n >= 8");
  const Gaussians4Geometry geo;
  Rng rng(seed);

  const std::vector<int> counts = allocate(n, {1, 1, 1, 1});
  const double cx[4] = {-geo.inner_offset, geo.inner_offset, -geo.outer_offset,
                        geo.outer_offset};
  const double sd[4] = {geo.inner_std, geo.inner_std, geo.outer_std,
                        geo.outer_std};

  PointCloud pc;
  pc.points.resize(n, 3);
  VectorXi labels(n);
  int row = 0;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < counts[k]; ++i, ++row) {
      pc.points(row, 0) = cx[k] + sd[k] * rng.normal();
      pc.points(row, 1) = sd[k] * rng.normal();
      pc.points(row, 2) = sd[k] * rng.normal();
      labels[row] = k + 1;
    }
  }
  pc.truth_labels = labels;
  return pc;
}

PointCloud gen_rings3(int n, uint64_t seed) {
  if (n < 6) fail(ErrorCode::usage, "rings3 wants n >= 6");
  const RingsGeometry geo;
  Rng rng(seed);

  // Area-uniform density: counts proportional to annulus area.
  std::vector<double> shares(3);
  for (int k = 0; k < 3; ++k) {
    const double r_in = geo.radius[k] - geo.width / 2;
    const double r_out = geo.radius[k] + geo.width / 2;
    shares[k] = r_out * r_out - r_in * r_in;
  }
  const std::vector<int> counts = allocate(n, shares);

  PointCloud pc;
  pc.points.resize(n, 2);
  VectorXi labels(n);
  int row = 0;
  for (int k = 0; k < 3; ++k) {
    const double r_in = geo.radius[k] - geo.width / 2;
    const double r_out = geo.radius[k] + geo.width / 2;
    for (int i = 0; i < counts[k]; ++i, ++row) {
      const double r =
          std::sqrt(rng.uniform(r_in * r_in, r_out * r_out));
      const double a = rng.uniform(0.0, 2.0 * M_PI);
      pc.points(row, 0) = r * std::cos(a);
      pc.points(row, 1) = r * std::sin(a);
      labels[row] = k + 1;
    }
  }
  pc.truth_labels = labels;
  return pc;
}

int bottleneck_group5(int piece) {
  switch (piece) {
    case 1: case 2: case 3: case 4: case 5: return piece;
    case 6: return 1;  // left half of bridge 1 joins blob 1
    case 7: return 2;
    case 8: return 3;
    case 9: return 4;
    default: fail(ErrorCode::usage, "bottleneck piece label out of range");
  }
}

int bottleneck_group3(int piece) {
  const int g5 = bottleneck_group5(piece);
  if (g5 <= 2) return 1;  // left dumbbell
  if (g5 <= 4) return 2;  // right dumbbell
  return 3;               // extra blob
}

int bottleneck_group2(int piece) {
  return bottleneck_group3(piece) == 1 ? 1 : 2;
}

PointCloud gen_bottlenecks(int n, uint64_t seed) {
  if (n < 18) fail(ErrorCode::usage, "bottlenecks wants n >= 18");
  const BottleneckGeometry geo;
  Rng rng(seed);

  // Five blobs of equal size, two bridges at bridge_share of a blob.
  const std::vector<int> counts =
      allocate(n, {1, 1, 1, 1, 1, geo.bridge_share, geo.bridge_share});

  PointCloud pc;
  pc.points.resize(n, 2);
  VectorXi labels(n);
  int row = 0;
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < counts[k]; ++i, ++row) {
      pc.points(row, 0) = geo.blob_x[k] + geo.blob_std * rng.normal();
      pc.points(row, 1) = geo.blob_std * rng.normal();
      labels[row] = k + 1;
    }
  }
  // Bridge b spans between blob pair (2b, 2b+1); halves get distinct labels.
  for (int b = 0; b < 2; ++b) {
    const double lo = geo.blob_x[2 * b] + geo.bridge_margin;
    const double hi = geo.blob_x[2 * b + 1] - geo.bridge_margin;
    const double mid = 0.5 * (lo + hi);
    for (int i = 0; i < counts[5 + b]; ++i, ++row) {
      const double x = rng.uniform(lo, hi);
      pc.points(row, 0) = x;
      pc.points(row, 1) =
          rng.uniform(-geo.bridge_half_height, geo.bridge_half_height);
      labels[row] = 6 + 2 * b + (x < mid ? 0 : 1);
    }
  }
  pc.truth_labels = labels;
  return pc;
}

PointCloud gen_trapezoid(int n, const std::array<double, 3>& deltas,
                         uint64_t seed) {
  if (n < 8) fail(ErrorCode::usage, "trapezoid wants n >= 8");
  if (!(deltas[0] < deltas[1] && deltas[1] < deltas[2]))
    fail(ErrorCode::usage, "trapezoid gaps must satisfy d1 < d2 < d3");
  const double half_diff = 0.5 * (deltas[1] - deltas[0]);
  if (deltas[2] <= half_diff)
    fail(ErrorCode::usage, "d3 too short to close the trapezoid");
  const double h = std::sqrt(deltas[2] * deltas[2] - half_diff * half_diff);
  const double spread = deltas[0] / 12.0;

  Rng rng(seed);
  const std::vector<int> counts = allocate(n, {1, 1, 1, 1});
  const double cx[4] = {-deltas[0] / 2, deltas[0] / 2, -deltas[1] / 2,
                        deltas[1] / 2};
  const double cy[4] = {0.0, 0.0, h, h};

  PointCloud pc;
  pc.points.resize(n, 2);
  VectorXi labels(n);
  int row = 0;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < counts[k]; ++i, ++row) {
      pc.points(row, 0) = cx[k] + spread * rng.normal();
      pc.points(row, 1) = cy[k] + spread * rng.normal();
      labels[row] = k + 1;
    }
  }
  pc.truth_labels = labels;
  return pc;
}

}  // namespace mdc::synth
