#include "willmore/gallery.hpp"

#include <cmath>
#include <numbers>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// j (a + ib) = a j - b k;  (a + ib) j = a j + b k.
Quaternion j_left(std::complex<double> c) { return {0.0, 0.0, c.real(), -c.imag()}; }
Quaternion j_right(std::complex<double> c) { return {0.0, 0.0, c.real(), c.imag()}; }
Quaternion complex_q(std::complex<double> c) { return from_complex(c.real(), c.imag()); }

void check_resolution(int res) {
  if (res < 8) throw InvalidArgumentError("resolution must be at least 8 (got " + std::to_string(res) + ")");
}

template <class F>
SurfaceChart sample(const GridChart& chart, const McsOptions& options, F&& f) {
  return SurfaceChart(Field<Quaternion>::generate(chart, [&](int i, int j) { return f(chart.x(i), chart.y(j)); }),
                      options);
}

}  // namespace

std::complex<double> evaluate(const ComplexPolynomial& p, std::complex<double> z) {
  std::complex<double> v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
  return v;
}

const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names = {"round-sphere", "clifford-torus",   "clifford-torus-inverted",
                                                 "catenoid",     "holo-curve",       "twistor-cubic",
                                                 "non-willmore-control"};
  return names;
}

SurfaceChart make_surface(const SurfaceSpec& spec, const McsOptions& options) {
  check_resolution(spec.resolution);
  const int n = spec.resolution;
  if (spec.name == "round-sphere") return round_sphere(n, options);
  if (spec.name == "clifford-torus") return clifford_torus(n, options);
  if (spec.name == "clifford-torus-inverted") return clifford_torus_inverted(n, spec.inversion_center, options);
  if (spec.name == "catenoid") return catenoid_patch(n, spec.umax, options);
  if (spec.name == "holo-curve") return holo_curve_c2(spec.holo_p, n, options);
  if (spec.name == "twistor-cubic") return twistor_projection(spec.twistor_h, n, spec.twistor_convention, options);
  if (spec.name == "non-willmore-control") return non_willmore_control(n, spec.control_amplitude, options);
  throw InvalidArgumentError("unknown surface '" + spec.name + "'");
}

SurfaceChart round_sphere(int res, const McsOptions& options) {
  check_resolution(res);
  return sample(GridChart::rect(res, res, -1.0, 1.0, -1.0, 1.0), options,
                [](double x, double y) { return from_complex(x, y); });
}

SurfaceChart clifford_torus(int res, const McsOptions& options) {
  check_resolution(res);
  const double s = 1.0 / std::numbers::sqrt2;
  return sample(GridChart::torus(res, res, 0.0, kTwoPi, 0.0, kTwoPi), options, [s](double u, double v) {
    return Quaternion{std::cos(u), std::sin(u), std::cos(v), std::sin(v)} * s;
  });
}

SurfaceChart clifford_torus_inverted(int res, const Quaternion& c, const McsOptions& options) {
  check_resolution(res);
  const double s = 1.0 / std::numbers::sqrt2;
  return sample(GridChart::torus(res, res, 0.0, kTwoPi, 0.0, kTwoPi), options, [&](double u, double v) {
    return qinv(Quaternion{std::cos(u), std::sin(u), std::cos(v), std::sin(v)} * s - c);
  });
}

SurfaceChart catenoid_patch(int res, double umax, const McsOptions& options) {
  check_resolution(res);
  if (!(umax > 0.0)) throw InvalidArgumentError("catenoid umax must be positive");
  return sample(GridChart::rect(res, res, -umax, umax, 0.0, kTwoPi, true), options, [](double u, double v) {
    return Quaternion{0.0, std::cosh(u) * std::cos(v), std::cosh(u) * std::sin(v), u};
  });
}

SurfaceChart holo_curve_c2(const ComplexPolynomial& p, int res, const McsOptions& options) {
  check_resolution(res);
  return sample(GridChart::rect(res, res, -1.0, 1.0, -1.0, 1.0), options, [&](double x, double y) {
    const std::complex<double> z(x, y);
    return complex_q(z) + j_left(evaluate(p, z));
  });
}

SurfaceChart twistor_projection(const std::array<ComplexPolynomial, 4>& h, int res, TwistorConvention convention,
                                const McsOptions& options) {
  check_resolution(res);
  auto jt = convention == TwistorConvention::LeftJ ? j_left : j_right;
  return sample(GridChart::rect(res, res, 1.5, 2.5, -0.5, 0.5), options, [&](double x, double y) {
    const std::complex<double> z(x, y);
    const Quaternion a = complex_q(evaluate(h[0], z)) + jt(evaluate(h[1], z));
    const Quaternion b = complex_q(evaluate(h[2], z)) + jt(evaluate(h[3], z));
    return a * qinv(b);
  });
}

SurfaceChart non_willmore_control(int res, double amplitude, const McsOptions& options) {
  check_resolution(res);
  return sample(GridChart::rect(res, res, -1.0, 1.0, -1.0, 1.0), options,
                [amplitude](double x, double y) { return Quaternion{x, y, amplitude * x * x, 0.0}; });
}

}  // namespace willmore
