#pragma once

// Resolution-aware thresholds. Every constant here was calibrated once on the
// gallery surfaces; `scale` multiplies all of them (the CLI's --tol-scale).

#include <algorithm>

namespace willmore {

struct Tolerances {
  static constexpr int kVersion = 1;

  double scale = 1.0;

  /// A Hopf field counts as identically zero when its max norm falls below
  /// hopf_zero_constant * h^2 * (|A| + |Q|), or below hopf_zero_floor.
  double hopf_zero_constant = 100.0;
  double hopf_zero_floor = 1e-8;
  /// Hopf-field zeros (holes of a line field) relative to the field's max.
  double eps_zero = 1e-5;

  /// Chordal radius below which a transform counts as a constant map, at
  /// h = 1/127; grows like h^2 on coarser grids.
  double constant_map = 1e-3;
  /// Minimum chordal distance between a surface and the chart's infinity.
  double frame_margin = 0.05;
  int max_chart_attempts = 16;

  /// Willmore gate: the harmonicity residual must shrink by at least this
  /// factor when the same surface is sampled at half the resolution, unless
  /// it is already at the roundoff floor.
  double gate_ratio = 2.5;
  double gate_floor = 1e-8;
  /// Transforms carry inherited sampling error, so they are certified by the
  /// scale-free residual |d*A| L / (|A| + |Q|) instead (L = chart extent).
  double derived_gate = 1.0;

  /// 1-step transform: closedness defect allowed per unit of harmonicity.
  double closedness_factor = 10.0;
  double closedness_floor = 1e-9;

  /// Relative energy jump allowed against 4 pi v.
  double quantization = 0.02;
  double degree_rounding = 0.05;

  double hopf_zero(double h_rel, double hopf_scale) const {
    return scale * std::max(hopf_zero_floor, hopf_zero_constant * h_rel * h_rel * hopf_scale);
  }
  double constant_map_radius(double h_rel) const {
    const double r = h_rel * 127.0;
    return scale * constant_map * std::max(1.0, r * r);
  }
};

}  // namespace willmore
