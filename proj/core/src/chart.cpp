#include "willmore/chart.hpp"

#include <cmath>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

GridChart GridChart::torus(int nx, int ny, double x0, double x1, double y0, double y1) {
  GridChart c;
  c.kind = ChartKind::Torus;
  c.nx = nx;
  c.ny = ny;
  c.x0 = x0;
  c.y0 = y0;
  c.periodic_x = c.periodic_y = true;
  c.hx = nx > 0 ? (x1 - x0) / nx : 0.0;
  c.hy = ny > 0 ? (y1 - y0) / ny : 0.0;
  c.validate();
  return c;
}

GridChart GridChart::rect(int nx, int ny, double x0, double x1, double y0, double y1, bool periodic_y) {
  GridChart c;
  c.kind = ChartKind::DiskRect;
  c.nx = nx;
  c.ny = ny;
  c.x0 = x0;
  c.y0 = y0;
  c.periodic_y = periodic_y;
  c.hx = nx > 1 ? (x1 - x0) / (nx - 1) : 0.0;
  c.hy = ny > 1 ? (periodic_y ? (y1 - y0) / ny : (y1 - y0) / (ny - 1)) : 0.0;
  c.validate();
  return c;
}

void GridChart::validate() const {
  if (nx < 8 || ny < 8) {
    throw InvalidArgumentError("grid chart needs at least 8 nodes per axis (got " + std::to_string(nx) + "x" +
                               std::to_string(ny) + ")");
  }
  if (!(hx > 0.0) || !(hy > 0.0)) throw InvalidArgumentError("grid spacings must be positive");
  if (kind == ChartKind::Torus && !(periodic_x && periodic_y)) {
    throw InvalidArgumentError("torus charts are periodic in both axes");
  }
}

int GridChart::boundary_distance(int i, int j) const {
  int d = std::numeric_limits<int>::max();
  if (!periodic_x) d = std::min({d, i, nx - 1 - i});
  if (!periodic_y) d = std::min({d, j, ny - 1 - j});
  return d;
}

NodeMask interior_mask(const GridChart& chart, int margin) {
  return NodeMask::generate(chart, [&](int i, int j) -> std::uint8_t {
    return chart.boundary_distance(i, j) >= margin ? 1 : 0;
  });
}

Field<HMat2> connection_curvature(const OneForm<HMat2>& w) { return exterior_d(w) + wedge(w, w); }

double integrate(const Field<double>& rho, const NodeMask* mask) {
  const GridChart& c = rho.chart();
  std::vector<double> rows(static_cast<std::size_t>(c.ny), 0.0);
  auto weight = [](int k, int n, bool periodic) { return (!periodic && (k == 0 || k == n - 1)) ? 0.5 : 1.0; };
  parallel_for(rows.size(), [&](std::size_t jb, std::size_t je) {
    for (auto j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
      double s = 0.0;
      for (int i = 0; i < c.nx; ++i) {
        if (mask != nullptr && (*mask)(i, j) == 0) continue;
        s += weight(i, c.nx, c.periodic_x) * rho(i, j);
      }
      rows[static_cast<std::size_t>(j)] = s * weight(j, c.ny, c.periodic_y);
    }
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total * c.hx * c.hy;
}

PathIntegral path_integrate(const OneForm<Quaternion>& w, Node base, const NodeMask* defect_mask) {
  const GridChart& c = w.chart();
  if (base.i < 0 || base.i >= c.nx || base.j < 0 || base.j >= c.ny) {
    throw InvalidArgumentError("path integration base node outside the chart");
  }
  PathIntegral out{Field<Quaternion>(c), 0.0, {}};
  Field<Quaternion>& g = out.values;
  const double hx = c.hx, hy = c.hy;
  const int bj = base.j;

  for (int i = base.i + 1; i < c.nx; ++i) g(i, bj) = g(i - 1, bj) + (w.cx(i - 1, bj) + w.cx(i, bj)) * (0.5 * hx);
  for (int i = base.i - 1; i >= 0; --i) g(i, bj) = g(i + 1, bj) - (w.cx(i + 1, bj) + w.cx(i, bj)) * (0.5 * hx);

  parallel_for(static_cast<std::size_t>(c.nx), [&](std::size_t ib, std::size_t ie) {
    for (auto i = static_cast<int>(ib); i < static_cast<int>(ie); ++i) {
      for (int j = bj + 1; j < c.ny; ++j) g(i, j) = g(i, j - 1) + (w.cy(i, j - 1) + w.cy(i, j)) * (0.5 * hy);
      for (int j = bj - 1; j >= 0; --j) g(i, j) = g(i, j + 1) - (w.cy(i, j + 1) + w.cy(i, j)) * (0.5 * hy);
    }
  });

  // Circulation around each cell (i, j) -> (i+1, j) -> (i+1, j+1) -> (i, j+1).
  const int cells_x = c.periodic_x ? c.nx : c.nx - 1;
  const int cells_y = c.periodic_y ? c.ny : c.ny - 1;
  std::vector<double> row_max(static_cast<std::size_t>(cells_y), 0.0);
  parallel_for(row_max.size(), [&](std::size_t jb, std::size_t je) {
    for (auto j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
      const int jp = (j + 1) % c.ny;
      double m = 0.0;
      for (int i = 0; i < cells_x; ++i) {
        const int ip = (i + 1) % c.nx;
        if (defect_mask != nullptr && ((*defect_mask)(i, j) == 0 || (*defect_mask)(ip, j) == 0 ||
                                       (*defect_mask)(i, jp) == 0 || (*defect_mask)(ip, jp) == 0)) {
          continue;
        }
        const Quaternion circ = (w.cx(i, j) + w.cx(ip, j)) * (0.5 * hx) + (w.cy(ip, j) + w.cy(ip, jp)) * (0.5 * hy) -
                                (w.cx(i, jp) + w.cx(ip, jp)) * (0.5 * hx) - (w.cy(i, j) + w.cy(i, jp)) * (0.5 * hy);
        m = std::max(m, circ.abs());
      }
      row_max[static_cast<std::size_t>(j)] = m;
    }
  });
  for (double m : row_max) out.closedness_defect = std::max(out.closedness_defect, m);
  out.closedness_defect /= hx * hy;

  if (c.closed()) {
    Quaternion px, py;
    for (int i = 0; i < c.nx; ++i) px += (w.cx(i, bj) + w.cx((i + 1) % c.nx, bj)) * (0.5 * hx);
    for (int j = 0; j < c.ny; ++j) py += (w.cy(base.i, j) + w.cy(base.i, (j + 1) % c.ny)) * (0.5 * hy);
    out.periods = {px, py};
  }
  return out;
}

}  // namespace willmore
