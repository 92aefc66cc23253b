#include "mdc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdc/error.hpp"
#include "mdc/rng.hpp"

namespace mdc {

namespace {

double sq_dist_rows(const MatrixXd& a, int i, const MatrixXd& b, int j) {
  double s = 0.0;
  for (int c = 0; c < a.cols(); ++c) {
    const double diff = a(i, c) - b(j, c);
    s += diff * diff;
  }
  return s;
}

struct LloydOutcome {
  VectorXi labels;
  double inertia = std::numeric_limits<double>::infinity();
};

LloydOutcome lloyd_once(const MatrixXd& pts, int K, uint64_t seed) {
  const int n = static_cast<int>(pts.rows());
  const int d = static_cast<int>(pts.cols());
  Rng rng(seed);

  // Careful seeding: first center uniform, the rest distance-squared weighted.
  MatrixXd centers(K, d);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  int first = rng.uniform_int(n);
  centers.row(0) = pts.row(first);
  for (int k = 1; k < K; ++k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], sq_dist_rows(pts, i, centers, k - 1));
      total += dist2[i];
    }
    int chosen = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = rng.uniform_int(n);
    }
    centers.row(k) = pts.row(chosen);
  }

  VectorXi labels = VectorXi::Zero(n);
  double inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    double new_inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist_rows(pts, i, centers, 0);
      for (int k = 1; k < K; ++k) {
        const double d2 = sq_dist_rows(pts, i, centers, k);
        if (d2 < best_d) {
          best_d = d2;
          best = k;
        }
      }
      labels[i] = best;
      new_inertia += best_d;
    }

    centers.setZero();
    std::vector<int> counts(K, 0);
    for (int i = 0; i < n; ++i) {
      centers.row(labels[i]) += pts.row(i);
      ++counts[labels[i]];
    }
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) {
        centers.row(k) /= counts[k];
      } else {
        // Re-seed an empty cluster at the point farthest from its center.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d2 = sq_dist_rows(pts, i, centers, labels[i]);
          if (d2 > far_d) {
            far_d = d2;
            far = i;
          }
        }
        centers.row(k) = pts.row(far);
      }
    }

    if (inertia - new_inertia <= 1e-9 * std::max(new_inertia, 1e-300) &&
        iter > 0) {
      inertia = new_inertia;
      break;
    }
    inertia = new_inertia;
  }
  return {std::move(labels), inertia};
}

Clustering relabel_consecutive(const VectorXi& raw) {
  const int n = static_cast<int>(raw.size());
  VectorXi labels(n);
  std::vector<int> ids;
  std::vector<int> first_member;
  for (int i = 0; i < n; ++i) {
    int id = -1;
    for (size_t k = 0; k < ids.size(); ++k)
      if (ids[k] == raw[i]) {
        id = static_cast<int>(k);
        break;
      }
    if (id < 0) {
      id = static_cast<int>(ids.size());
      ids.push_back(raw[i]);
      first_member.push_back(i);
    }
    labels[i] = id + 1;
  }
  Clustering c;
  c.labels = std::move(labels);
  c.K = static_cast<int>(ids.size());
  c.modes = std::move(first_member);  // representative = first member
  return c;
}

}  // namespace

Clustering kmeans(const MatrixXd& points, int K, uint64_t seed, int restarts) {
  const int n = static_cast<int>(points.rows());
  if (K < 1 || K > n) fail(ErrorCode::usage, "kmeans wants 1 <= K <= n");

  std::vector<LloydOutcome> outcomes(restarts);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r)
    outcomes[r] = lloyd_once(points, K, seed + static_cast<uint64_t>(r));

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[r].inertia < outcomes[best].inertia) best = r;
  return relabel_consecutive(outcomes[best].labels);
}

Clustering spectral_cluster(const MarkovModel& model, int K, uint64_t seed) {
  if (K < 2 || K >= model.n)
    fail(ErrorCode::usage, "spectral clustering wants 2 <= K < n");
  if (model.spectrum.m() < K)
    fail(ErrorCode::usage,
         "model spectrum holds " + std::to_string(model.spectrum.m()) +
             " eigenpairs, need K = " + std::to_string(K));
  MatrixXd emb = model.spectrum.vectors.leftCols(K);
  for (int i = 0; i < emb.rows(); ++i) {
    const double norm = emb.row(i).norm();
    if (norm > 0.0) emb.row(i) /= norm;
  }
  return kmeans(emb, K, seed);
}

std::vector<HscClustering> hsc_over_times(const MarkovModel& model,
                                          const std::vector<double>& times,
                                          uint64_t seed) {
  const int m = model.spectrum.m();
  const int steps = static_cast<int>(times.size());
  std::vector<double> gap(steps);
  std::vector<int> k_at(steps);
  for (int s = 0; s < steps; ++s) {
    double best = -1.0;
    int best_k = 1;
    for (int k = 0; k + 1 < m; ++k) {
      const double a = std::pow(std::abs(model.spectrum.values[k]), times[s]);
      const double b = std::pow(std::abs(model.spectrum.values[k + 1]), times[s]);
      const double g = std::abs(a - b);
      if (g > best) {
        best = g;
        best_k = k + 1;
      }
    }
    gap[s] = best;
    k_at[s] = best_k;
  }

  // Local maxima over runs of equal values; a plateau takes its first index.
  std::vector<int> maxima;
  int s = 0;
  while (s < steps) {
    int e = s;
    while (e + 1 < steps && gap[e + 1] == gap[s]) ++e;
    const bool left_ok = s == 0 || gap[s - 1] < gap[s];
    const bool right_ok = e == steps - 1 || gap[e + 1] < gap[s];
    if (left_ok && right_ok) maxima.push_back(s);
    s = e + 1;
  }

  std::vector<HscClustering> out;
  const double t_max = times.empty() ? 1.0 : times.back();
  double prev_t = 0.0;
  for (int idx : maxima) {
    const int k = k_at[idx];
    if (k < 2 || k >= model.n) continue;
    HscClustering h;
    h.clustering = spectral_cluster(model, k, seed);
    h.time = times[idx];
    h.alpha = (times[idx] - prev_t) / t_max;
    h.beta_gap = gap[idx];
    prev_t = times[idx];
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<HscClustering> hsc(const MarkovModel& model, int t_max,
                               uint64_t seed) {
  if (t_max < 1) fail(ErrorCode::usage, "t_max must be at least 1");
  std::vector<double> times(t_max);
  std::iota(times.begin(), times.end(), 1.0);
  return hsc_over_times(model, times, seed);
}

Dendrogram slc(const MatrixXd& points) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) fail(ErrorCode::usage, "need at least two points");

  // Dense Prim MST; edges then merge in weight order (ties by endpoint ids).
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> to(n, -1);
  std::vector<char> used(n, 0);
  struct Edge {
    double w;
    int a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  used[0] = 1;
  for (int j = 1; j < n; ++j) {
    best[j] = sq_dist_rows(points, 0, points, j);
    to[j] = 0;
  }
  for (int it = 1; it < n; ++it) {
    int pick = -1;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (pick < 0 || best[j] < best[pick] || (best[j] == best[pick] && j < pick))
        pick = j;
    }
    used[pick] = 1;
    edges.push_back({best[pick], std::min(pick, to[pick]), std::max(pick, to[pick])});
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = sq_dist_rows(points, pick, points, j);
      if (d < best[j] || (d == best[j] && pick < to[j])) {
        best[j] = d;
        to[j] = pick;
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.w != y.w) return x.w < y.w;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });

  // Replay merges, tracking cluster membership to account diameters. Each
  // point pair crosses exactly one merge, so the total cross-scan work is
  // O(n^2) even though it looks nested.
  Dendrogram dendro;
  dendro.n = n;
  std::vector<std::vector<int>*> bucket(2 * n - 1, nullptr);
  std::vector<std::vector<int>> storage;
  storage.reserve(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    storage.push_back({i});
  }
  for (int i = 0; i < n; ++i) bucket[i] = &storage[i];

  std::vector<int> find_root(2 * n - 1);
  std::iota(find_root.begin(), find_root.end(), 0);
  auto root = [&](int x) {
    while (find_root[x] != x) {
      find_root[x] = find_root[find_root[x]];
      x = find_root[x];
    }
    return x;
  };

  double running_max_within = 0.0;
  int next_id = n;
  for (const Edge& e : edges) {
    const int ra = root(e.a);
    const int rb = root(e.b);
    auto& ma = *bucket[ra];
    auto& mb = *bucket[rb];
    double cross_sq = 0.0;
    for (int x : ma)
      for (int y : mb) cross_sq = std::max(cross_sq, sq_dist_rows(points, x, points, y));
    running_max_within = std::max(running_max_within, cross_sq);

    Dendrogram::Merge mg;
    mg.a = ra;
    mg.b = rb;
    mg.height = std::sqrt(e.w);
    mg.size = static_cast<int>(ma.size() + mb.size());
    mg.max_within = std::sqrt(running_max_within);
    dendro.merges.push_back(mg);

    storage.push_back({});
    auto& merged = storage.back();
    merged.reserve(ma.size() + mb.size());
    merged.insert(merged.end(), ma.begin(), ma.end());
    merged.insert(merged.end(), mb.begin(), mb.end());
    find_root[ra] = next_id;
    find_root[rb] = next_id;
    bucket[next_id] = &merged;
    ++next_id;
  }
  return dendro;
}

namespace {

VectorXi labels_at_level(const Dendrogram& dendro, int K) {
  const int n = dendro.n;
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const int merges_applied = n - K;
  for (int j = 0; j < merges_applied; ++j) {
    parent[root(dendro.merges[j].a)] = n + j;
    parent[root(dendro.merges[j].b)] = n + j;
  }
  VectorXi raw(n);
  for (int i = 0; i < n; ++i) raw[i] = root(i);
  return raw;
}

}  // namespace

Clustering slc_cut(const Dendrogram& dendro, int K) {
  if (K < 1 || K > dendro.n) fail(ErrorCode::usage, "cut level out of range");
  Clustering c;
  VectorXi raw = labels_at_level(dendro, K);
  // Relabel by first appearance.
  std::vector<int> ids;
  std::vector<int> firsts;
  c.labels.resize(raw.size());
  for (int i = 0; i < raw.size(); ++i) {
    int id = -1;
    for (size_t k = 0; k < ids.size(); ++k)
      if (ids[k] == raw[i]) {
        id = static_cast<int>(k);
        break;
      }
    if (id < 0) {
      id = static_cast<int>(ids.size());
      ids.push_back(raw[i]);
      firsts.push_back(i);
    }
    c.labels[i] = id + 1;
  }
  c.K = static_cast<int>(ids.size());
  c.modes = std::move(firsts);
  return c;
}

Clustering slc_select(const Dendrogram& dendro) {
  const int n = dendro.n;
  const int max_level = std::max(2, n / 2);
  int best_level = 2;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (int K = 2; K <= max_level; ++K) {
    // After n-K merges: within = recorded max diameter, between = next height.
    const int applied = n - K;
    const double within =
        applied > 0 ? dendro.merges[applied - 1].max_within : 0.0;
    const double between = dendro.merges[applied].height;
    const double ratio = between > 0.0
                             ? within / between
                             : std::numeric_limits<double>::infinity();
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_level = K;
    }
  }
  return slc_cut(dendro, best_level);
}

}  // namespace mdc
