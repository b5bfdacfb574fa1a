#pragma once

// Independent reference for the Willmore energy: treats a sampled map into
// R^4 classically through its first and second fundamental forms. Works on
// plain coordinate arrays so it shares nothing with the quaternionic code.

#include <array>
#include <vector>

namespace willmore {

class SurfaceChart;

struct EuclideanSample {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  bool periodic_x = false;
  bool periodic_y = false;
  /// Row-major (index j * nx + i) coordinates in R^4.
  std::vector<std::array<double, 4>> points;
  /// Nodes this close to a non-periodic edge are left out of the integrals.
  int margin = 4;
};

struct EuclideanOracleResult {
  /// Integral of (|H|^2 - K - K_perp) dA.
  double energy = 0.0;
  /// Integral of |H|^2 dA.
  double mean_curvature_energy = 0.0;
  double area = 0.0;
  double max_mean_curvature = 0.0;
  /// (|H|^2 - K - K_perp) sqrt(EG - F^2) per node, 0 outside the margin.
  std::vector<double> density;
};

EuclideanOracleResult euclidean_energy_oracle(const EuclideanSample& sample);
/// Copies g's coefficients (1, i, j, k) and uses the chart's trusted margin.
EuclideanOracleResult euclidean_energy_oracle(const SurfaceChart& s);

}  // namespace willmore
