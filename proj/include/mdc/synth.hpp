#pragma once

#include <array>
#include <cstdint>

#include "mdc/types.hpp"

namespace mdc::synth {

/// Geometry constants behind the generators. Figure-level shape (radii,
/// spreads, gaps) is a convention of this implementation; tests pin the
/// documented orderings against these values.
struct RingsGeometry {
  std::array<double, 3> radius{1.00, 1.85, 2.90};
  double width = 0.20;       // full radial width of each annulus
  // edge gaps: 0.65 inner-middle, 0.85 middle-outer (inner gap smaller)
};

struct Gaussians4Geometry {
  double inner_offset = 1.85;  // inner pair at (+-inner_offset, 0, 0)
  double inner_std = 0.65;
  double outer_offset = 6.00;  // outer pair at (+-outer_offset, 0, 0)
  double outer_std = 1.60;
};

struct BottleneckGeometry {
  // Two dumbbells on the x axis plus one extra blob right of the second.
  std::array<double, 5> blob_x{0.0, 5.0, 11.0, 16.0, 20.5};
  double blob_std = 0.50;
  double bridge_half_height = 0.35;
  double bridge_margin = 1.20;  // strip starts this far from each blob center
  double bridge_share = 0.50;   // bridge size as a fraction of a blob size
};

inline constexpr int kRingsDefaultN = 5380;
inline constexpr int kGaussians4DefaultN = 4000;
inline constexpr int kBottleneckDefaultN = 6550;

/// Four 3-D Gaussian blobs: a dense small-radius pair near the origin and a
/// wide pair farther out. Truth labels 1..4 per blob.
PointCloud gen_gaussians4(int n = kGaussians4DefaultN, uint64_t seed = 0);

/// Three concentric annuli of uniform area density; the inner-middle gap is
/// smaller than the middle-outer gap. Truth labels 1..3 inside out.
PointCloud gen_rings3(int n = kRingsDefaultN, uint64_t seed = 0);

/// Two dumbbells (blob - uniform strip - blob) plus one extra blob nearer the
/// right dumbbell. Truth labels are the nine construction pieces (blobs 1..5,
/// bridge halves 6..9); merging bridge halves into their blobs gives the
/// 5-level, dumbbells the 3-level and the right-dumbbell-plus-extra the
/// 2-level grouping.
PointCloud gen_bottlenecks(int n = kBottleneckDefaultN, uint64_t seed = 0);

/// Four equal blobs on trapezoid vertices with gaps deltas[0] < deltas[1] <
/// deltas[2]; deltas[2] is the leg length of the isosceles trapezoid.
PointCloud gen_trapezoid(int n, const std::array<double, 3>& deltas,
                         uint64_t seed = 0);

/// Fine-to-coarse grouping helpers for the bottleneck piece labels.
int bottleneck_group5(int piece_label);
int bottleneck_group3(int piece_label);
int bottleneck_group2(int piece_label);

}  // namespace mdc::synth
