#pragma once

// Node-centred discretization of a conformal coordinate domain and the
// exterior calculus used by the surface pipeline: differentials, the complex
// structure * on 1-forms, wedge products, exterior derivative, quadrature and
// path integration.
//
// A 1-form is stored by its values on the coordinate fields d/dx and d/dy.
// With J d/dx = d/dy the complex structure acts as (*w)(X) = w(JX), i.e.
// (*w)_x = w_y and (*w)_y = -w_x.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "willmore/parallel.hpp"
#include "willmore/quaternion.hpp"

namespace willmore {

enum class ChartKind { DiskRect, Torus };

struct GridChart {
  ChartKind kind = ChartKind::DiskRect;
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  bool periodic_x = false;
  bool periodic_y = false;
  /// Boundary layers whose samples are themselves derived from one-sided
  /// stencils (0 for sampled closed-form surfaces). Residual norms skip them.
  int halo = 0;

  /// Doubly periodic chart on [x0, x1) x [y0, y1).
  static GridChart torus(int nx, int ny, double x0, double x1, double y0, double y1);
  /// Rectangle [x0, x1] x [y0, y1]; with periodic_y the y range is [y0, y1).
  static GridChart rect(int nx, int ny, double x0, double x1, double y0, double y1, bool periodic_y = false);

  /// Throws InvalidArgumentError unless nx, ny >= 8 and hx, hy > 0.
  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  double extent_x() const { return periodic_x ? nx * hx : (nx - 1) * hx; }
  double extent_y() const { return periodic_y ? ny * hy : (ny - 1) * hy; }
  /// Largest spacing relative to its axis extent; the h in O(h^2) statements.
  double relative_spacing() const { return std::max(hx / extent_x(), hy / extent_y()); }
  bool closed() const { return periodic_x && periodic_y; }

  /// Distance in nodes to the nearest non-periodic edge (huge if none).
  int boundary_distance(int i, int j) const;

  bool same_grid(const GridChart& o) const {
    return nx == o.nx && ny == o.ny && hx == o.hx && hy == o.hy && x0 == o.x0 && y0 == o.y0 &&
           periodic_x == o.periodic_x && periodic_y == o.periodic_y;
  }
};

template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(const GridChart& chart, const T& fill = T{}) : chart_(chart), samples_(chart.size(), fill) {}
  Field(const GridChart& chart, std::vector<T> samples);

  /// Field with samples f(i, j).
  template <class F>
  static Field generate(const GridChart& chart, F&& f) {
    Field out(chart);
    parallel_for(static_cast<std::size_t>(chart.ny), [&](std::size_t jb, std::size_t je) {
      for (auto j = static_cast<int>(jb); j < static_cast<int>(je); ++j)
        for (int i = 0; i < chart.nx; ++i) out(i, j) = f(i, j);
    });
    return out;
  }

  const GridChart& chart() const { return chart_; }
  std::size_t size() const { return samples_.size(); }
  T& operator()(int i, int j) { return samples_[chart_.index(i, j)]; }
  const T& operator()(int i, int j) const { return samples_[chart_.index(i, j)]; }
  T& operator[](std::size_t n) { return samples_[n]; }
  const T& operator[](std::size_t n) const { return samples_[n]; }
  std::span<const T> samples() const { return samples_; }

  /// Field of f(value) per node.
  template <class F>
  auto map(F&& f) const {
    using R = decltype(f(std::declval<const T&>()));
    Field<R> out(chart_);
    parallel_for(size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t n = b; n < e; ++n) out[n] = f(samples_[n]);
    });
    return out;
  }

  /// Same samples on a chart with a different halo.
  Field with_halo(int halo) const {
    Field out = *this;
    out.chart_.halo = halo;
    return out;
  }

 private:
  GridChart chart_;
  std::vector<T> samples_;
};

template <class T>
struct OneForm {
  Field<T> cx;  // evaluation on d/dx
  Field<T> cy;  // evaluation on d/dy

  const GridChart& chart() const { return cx.chart(); }
};

using NodeMask = Field<std::uint8_t>;

// ---- pointwise magnitudes -------------------------------------------------

inline double magnitude2(double v) { return v * v; }
inline double magnitude2(const Quaternion& q) { return q.norm2(); }
inline double magnitude2(const HVec2& v) { return v.norm2(); }
inline double magnitude2(const HMat2& m) { return m.norm2(); }

template <class T>
Field<T> operator+(const Field<T>& a, const Field<T>& b);
template <class T>
Field<T> operator-(const Field<T>& a, const Field<T>& b);
template <class T>
Field<T> operator*(double s, const Field<T>& a);
template <class T>
OneForm<T> operator+(const OneForm<T>& a, const OneForm<T>& b);
template <class T>
OneForm<T> operator-(const OneForm<T>& a, const OneForm<T>& b);
template <class T>
OneForm<T> operator*(double s, const OneForm<T>& a);

/// Max over nodes (optionally restricted to mask != 0) of the Frobenius-type
/// magnitude. Returns 0 for an empty selection.
template <class T>
double max_norm(const Field<T>& f, const NodeMask* mask = nullptr);
template <class T>
double max_norm(const OneForm<T>& w, const NodeMask* mask = nullptr) {
  return std::max(max_norm(w.cx, mask), max_norm(w.cy, mask));
}

/// Nodes at least `margin` layers away from every non-periodic edge.
NodeMask interior_mask(const GridChart& chart, int margin);

// ---- calculus ---------------------------------------------------------------

/// Second-order central differences; one-sided second-order stencils at
/// non-periodic edges.
template <class T>
OneForm<T> differential(const Field<T>& f);

/// (*w)_x = w_y, (*w)_y = -w_x.
template <class T>
OneForm<T> star(const OneForm<T>& w) {
  return {w.cy, -1.0 * w.cx};
}

/// dx^dy coefficient a_x b_y - a_y b_x of the product form.
template <class T>
Field<T> wedge(const OneForm<T>& a, const OneForm<T>& b);

/// dx^dy coefficient d/dx(w_y) - d/dy(w_x).
template <class T>
Field<T> exterior_d(const OneForm<T>& w);

/// Curvature d w + w^w of the connection d + w.
Field<HMat2> connection_curvature(const OneForm<HMat2>& w);

/// Quadrature of a density: trapezoid weights on non-periodic axes, plain
/// node sums on periodic axes. Nodes outside `mask` contribute nothing.
double integrate(const Field<double>& rho, const NodeMask* mask = nullptr);

struct Node {
  int i = 0;
  int j = 0;
};

struct PathIntegral {
  Field<Quaternion> values;
  /// Max over cells of |circulation| / cell area (an estimate of |dw|).
  double closedness_defect = 0.0;
  /// Loop integrals along the base row and base column (torus only).
  std::vector<Quaternion> periods;
};

/// Integrates w along a comb spanning tree rooted at `base`: first along the
/// base row in both directions, then along every column away from the base
/// row. Trapezoid rule per edge; values(base) = 0. Cells touching nodes
/// outside `defect_mask` are ignored in the closedness defect.
PathIntegral path_integrate(const OneForm<Quaternion>& w, Node base, const NodeMask* defect_mask = nullptr);

/// Replaces every node flagged in `holes` by the value of the nearest
/// unflagged node (breadth-first over the 4-neighbour lattice, wrapping on
/// periodic axes). Ties resolve in scan order, so the result is
/// deterministic. Returns false if every node is flagged.
template <class T>
bool fill_from_nearest(Field<T>& f, const NodeMask& holes);

// ---- template definitions ---------------------------------------------------

template <class T>
Field<T>::Field(const GridChart& chart, std::vector<T> samples) : chart_(chart), samples_(std::move(samples)) {
  if (samples_.size() != chart_.size()) samples_.resize(chart_.size());
}

namespace detail {
template <class T, class Op>
Field<T> zip(const Field<T>& a, const Field<T>& b, Op op) {
  Field<T> out(a.chart());
  parallel_for(a.size(), [&](std::size_t s, std::size_t e) {
    for (std::size_t n = s; n < e; ++n) out[n] = op(a[n], b[n]);
  });
  return out;
}
}  // namespace detail

template <class T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
  return detail::zip(a, b, [](const T& p, const T& q) { return p + q; });
}
template <class T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
  return detail::zip(a, b, [](const T& p, const T& q) { return p - q; });
}
template <class T>
Field<T> operator*(double s, const Field<T>& a) {
  return a.map([s](const T& v) -> T { return s * v; });
}
template <class T>
OneForm<T> operator+(const OneForm<T>& a, const OneForm<T>& b) {
  return {a.cx + b.cx, a.cy + b.cy};
}
template <class T>
OneForm<T> operator-(const OneForm<T>& a, const OneForm<T>& b) {
  return {a.cx - b.cx, a.cy - b.cy};
}
template <class T>
OneForm<T> operator*(double s, const OneForm<T>& a) {
  return {s * a.cx, s * a.cy};
}

template <class T>
double max_norm(const Field<T>& f, const NodeMask* mask) {
  double best = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (mask != nullptr && (*mask)[n] == 0) continue;
    best = std::max(best, magnitude2(f[n]));
  }
  return std::sqrt(best);
}

namespace detail {

// Derivative along one axis at node (i, j); `axis` 0 = x, 1 = y.
template <class T>
T axis_derivative(const Field<T>& f, int i, int j, int axis) {
  const GridChart& c = f.chart();
  const int n = axis == 0 ? c.nx : c.ny;
  const bool periodic = axis == 0 ? c.periodic_x : c.periodic_y;
  const double h = axis == 0 ? c.hx : c.hy;
  const int k = axis == 0 ? i : j;
  auto at = [&](int m) -> const T& { return axis == 0 ? f(m, j) : f(i, m); };
  if (periodic) {
    const int kp = k + 1 == n ? 0 : k + 1;
    const int km = k == 0 ? n - 1 : k - 1;
    return (at(kp) - at(km)) * (0.5 / h);
  }
  if (k == 0) return (at(0) * -3.0 + at(1) * 4.0 - at(2)) * (0.5 / h);
  if (k == n - 1) return (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) * (0.5 / h);
  return (at(k + 1) - at(k - 1)) * (0.5 / h);
}

}  // namespace detail

template <class T>
OneForm<T> differential(const Field<T>& f) {
  const GridChart& c = f.chart();
  OneForm<T> out{Field<T>(c), Field<T>(c)};
  parallel_for(static_cast<std::size_t>(c.ny), [&](std::size_t jb, std::size_t je) {
    for (auto j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
      for (int i = 0; i < c.nx; ++i) {
        out.cx(i, j) = detail::axis_derivative(f, i, j, 0);
        out.cy(i, j) = detail::axis_derivative(f, i, j, 1);
      }
    }
  });
  return out;
}

template <class T>
Field<T> wedge(const OneForm<T>& a, const OneForm<T>& b) {
  Field<T> out(a.chart());
  parallel_for(out.size(), [&](std::size_t s, std::size_t e) {
    for (std::size_t n = s; n < e; ++n) out[n] = a.cx[n] * b.cy[n] - a.cy[n] * b.cx[n];
  });
  return out;
}

template <class T>
Field<T> exterior_d(const OneForm<T>& w) {
  const GridChart& c = w.chart();
  Field<T> out(c);
  parallel_for(static_cast<std::size_t>(c.ny), [&](std::size_t jb, std::size_t je) {
    for (auto j = static_cast<int>(jb); j < static_cast<int>(je); ++j)
      for (int i = 0; i < c.nx; ++i)
        out(i, j) = detail::axis_derivative(w.cy, i, j, 0) - detail::axis_derivative(w.cx, i, j, 1);
  });
  return out;
}

template <class T>
bool fill_from_nearest(Field<T>& f, const NodeMask& holes) {
  const GridChart& c = f.chart();
  std::vector<int> source(f.size(), -1);
  std::vector<std::size_t> queue;
  queue.reserve(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (holes[n] == 0) {
      source[n] = static_cast<int>(n);
      queue.push_back(n);
    }
  }
  if (queue.empty()) return false;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t n = queue[head];
    const int i = static_cast<int>(n % static_cast<std::size_t>(c.nx));
    const int j = static_cast<int>(n / static_cast<std::size_t>(c.nx));
    const std::pair<int, int> steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& [di, dj] : steps) {
      int ii = i + di, jj = j + dj;
      if (c.periodic_x) ii = (ii + c.nx) % c.nx;
      if (c.periodic_y) jj = (jj + c.ny) % c.ny;
      if (ii < 0 || ii >= c.nx || jj < 0 || jj >= c.ny) continue;
      const std::size_t m = c.index(ii, jj);
      if (source[m] >= 0) continue;
      source[m] = source[n];
      queue.push_back(m);
    }
  }
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (holes[n] != 0) f[n] = f[static_cast<std::size_t>(source[n])];
  }
  return true;
}

}  // namespace willmore
