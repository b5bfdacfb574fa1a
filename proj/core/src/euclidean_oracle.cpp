#include "willmore/euclidean_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "willmore/errors.hpp"
#include "willmore/mcs.hpp"

namespace willmore {

namespace {

using Vec4 = std::array<double, 4>;

Vec4 operator+(const Vec4& a, const Vec4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
Vec4 operator-(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
Vec4 operator*(double s, const Vec4& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
double dot(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

double det3(double a, double b, double c, double d, double e, double f, double g, double h, double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// Vector orthogonal to a, b, c with det(a, b, c, n) > 0.
Vec4 cross3(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 n{};
  for (int k = 0; k < 4; ++k) {
    int cols[3], m = 0;
    for (int l = 0; l < 4; ++l)
      if (l != k) cols[m++] = l;
    const double minor = det3(a[cols[0]], a[cols[1]], a[cols[2]], b[cols[0]], b[cols[1]], b[cols[2]], c[cols[0]],
                              c[cols[1]], c[cols[2]]);
    // Cofactor expansion of det(a, b, c, n) along the last row.
    n[k] = ((k + 3) % 2 == 0 ? 1.0 : -1.0) * minor;
  }
  return n;
}

struct Grid {
  const EuclideanSample& s;
  int wrap(int k, int n, bool periodic) const { return periodic ? (k + n) % n : k; }
  const Vec4& at(int i, int j) const {
    return s.points[static_cast<std::size_t>(wrap(j, s.ny, s.periodic_y)) * s.nx + wrap(i, s.nx, s.periodic_x)];
  }
};

}  // namespace

EuclideanOracleResult euclidean_energy_oracle(const EuclideanSample& s) {
  if (s.nx < 8 || s.ny < 8 || static_cast<std::size_t>(s.nx) * s.ny != s.points.size()) {
    throw InvalidArgumentError("euclidean oracle: sample size does not match the grid");
  }
  const Grid grid{s};
  const int margin = std::max(1, s.margin);
  EuclideanOracleResult out;
  out.density.assign(s.points.size(), 0.0);
  for (int j = 0; j < s.ny; ++j) {
    if (!s.periodic_y && (j < margin || j > s.ny - 1 - margin)) continue;
    for (int i = 0; i < s.nx; ++i) {
      if (!s.periodic_x && (i < margin || i > s.nx - 1 - margin)) continue;
      const Vec4& p = grid.at(i, j);
      const Vec4 fu = (0.5 / s.hx) * (grid.at(i + 1, j) - grid.at(i - 1, j));
      const Vec4 fv = (0.5 / s.hy) * (grid.at(i, j + 1) - grid.at(i, j - 1));
      const Vec4 fuu = (1.0 / (s.hx * s.hx)) * (grid.at(i + 1, j) - 2.0 * p + grid.at(i - 1, j));
      const Vec4 fvv = (1.0 / (s.hy * s.hy)) * (grid.at(i, j + 1) - 2.0 * p + grid.at(i, j - 1));
      const Vec4 fuv = (0.25 / (s.hx * s.hy)) *
                       ((grid.at(i + 1, j + 1) - grid.at(i - 1, j + 1)) - (grid.at(i + 1, j - 1) - grid.at(i - 1, j - 1)));

      const double E = dot(fu, fu), F = dot(fu, fv), G = dot(fv, fv);
      const double W = E * G - F * F;
      if (!(W > 0.0)) continue;

      // Orthonormal tangent frame e1 = a fu, e2 = b fu + c fv.
      const Vec4 e1 = (1.0 / std::sqrt(E)) * fu;
      const Vec4 t = fv - dot(fv, e1) * e1;
      const Vec4 e2 = (1.0 / std::sqrt(dot(t, t))) * t;
      auto normal_part = [&](const Vec4& v) { return v - dot(v, e1) * e1 - dot(v, e2) * e2; };
      const Vec4 IIuu = normal_part(fuu), IIuv = normal_part(fuv), IIvv = normal_part(fvv);

      const Vec4 Hv = (0.5 / W) * (G * IIuu - 2.0 * F * IIuv + E * IIvv);
      const double K = (dot(IIuu, IIvv) - dot(IIuv, IIuv)) / W;

      const double a = 1.0 / std::sqrt(E);
      const double c = 1.0 / std::sqrt(dot(t, t));
      const double b = -dot(fv, e1) / std::sqrt(E) * c;
      const Vec4 II11 = (a * a) * IIuu;
      const Vec4 II12 = a * (b * IIuu + c * IIuv);
      const Vec4 II22 = (b * b) * IIuu + (2.0 * b * c) * IIuv + (c * c) * IIvv;

      // Positively oriented normal frame (e1, e2, n1, n2).
      Vec4 n1{};
      double best = -1.0;
      for (int k = 0; k < 4; ++k) {
        Vec4 basis{};
        basis[k] = 1.0;
        const Vec4 cand = normal_part(basis);
        if (dot(cand, cand) > best) {
          best = dot(cand, cand);
          n1 = cand;
        }
      }
      n1 = (1.0 / std::sqrt(best)) * n1;
      Vec4 n2 = cross3(e1, e2, n1);
      n2 = (1.0 / std::sqrt(dot(n2, n2))) * n2;

      const double h1_11 = dot(II11, n1), h1_12 = dot(II12, n1), h1_22 = dot(II22, n1);
      const double h2_11 = dot(II11, n2), h2_12 = dot(II12, n2), h2_22 = dot(II22, n2);
      const double k_perp = -((h1_11 * h2_12 + h1_12 * h2_22) - (h2_11 * h1_12 + h2_12 * h1_22));

      const double area_element = std::sqrt(W);
      const double h2 = dot(Hv, Hv);
      const std::size_t n = static_cast<std::size_t>(j) * s.nx + i;
      out.density[n] = (h2 - K - k_perp) * area_element;
      out.energy += out.density[n];
      out.mean_curvature_energy += h2 * area_element;
      out.area += area_element;
      out.max_mean_curvature = std::max(out.max_mean_curvature, std::sqrt(h2));
    }
  }
  const double cell = s.hx * s.hy;
  out.energy *= cell;
  out.mean_curvature_energy *= cell;
  out.area *= cell;
  return out;
}

EuclideanOracleResult euclidean_energy_oracle(const SurfaceChart& s) {
  const GridChart& c = s.chart();
  EuclideanSample sample;
  sample.nx = c.nx;
  sample.ny = c.ny;
  sample.hx = c.hx;
  sample.hy = c.hy;
  sample.periodic_x = c.periodic_x;
  sample.periodic_y = c.periodic_y;
  sample.margin = c.halo + s.options().stencil_depth;
  sample.points.reserve(c.size());
  for (const Quaternion& q : s.g().samples()) sample.points.push_back({q.w, q.x, q.y, q.z});
  return euclidean_energy_oracle(sample);
}

}  // namespace willmore
