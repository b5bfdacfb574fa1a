#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/convergence.hpp"
#include "willmore/backlund.hpp"
#include "willmore/errors.hpp"
#include "willmore/euclidean_oracle.hpp"
#include "willmore/gallery.hpp"

using namespace willmore;
using willmore::testing::Decay;

namespace {

constexpr double kPi = std::numbers::pi;

SurfaceChart surface(const std::string& name, int res) {
  SurfaceSpec spec;
  spec.name = name;
  spec.resolution = res;
  return make_surface(spec);
}

template <class F>
Decay study(const std::string& name, F f, double floor = 1e-10) {
  Decay d;
  d.floor = floor;
  for (int n : {32, 64, 128}) d.values.push_back(f(surface(name, n)));
  return d;
}

// Plain R^4 samples of a parameterized patch for the oracle.
template <class F>
EuclideanSample patch(int n, double x0, double x1, double y0, double y1, F f) {
  EuclideanSample s;
  s.nx = s.ny = n;
  s.hx = (x1 - x0) / (n - 1);
  s.hy = (y1 - y0) / (n - 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) s.points.push_back(f(x0 + i * s.hx, y0 + j * s.hy));
  return s;
}

double max_line_distance(const LineField& f, const NodeMask& mask, const HVec2& p) {
  double d = 0.0;
  for (std::size_t n = 0; n < f.rep.size(); ++n)
    if (mask[n] != 0) d = std::max(d, chordal_distance(f.rep[n], p));
  return d;
}

}  // namespace

TEST_CASE("gallery names and validation") {
  CHECK(gallery_names().size() == 7);
  for (const auto& n : gallery_names()) CHECK_NOTHROW(surface(n, 16));
  CHECK_THROWS_AS(surface("klein-bottle", 16), InvalidArgumentError);
  CHECK_THROWS_AS(surface("clifford-torus", 4), InvalidArgumentError);
}

TEST_CASE("generators are deterministic") {
  for (const auto& n : gallery_names()) {
    const SurfaceChart a = surface(n, 24), b = surface(n, 24);
    for (std::size_t k = 0; k < a.chart().size(); ++k) REQUIRE(a.g()[k] == b.g()[k]);
  }
}

TEST_CASE("round sphere chart") {
  const SurfaceChart s = surface("round-sphere", 64);
  CHECK(max_norm(s.hopf().A) < 1e-8);
  CHECK(max_norm(s.hopf().Q) < 1e-8);
  CHECK(std::abs(willmore_energy(s)) < 1e-6);
  CHECK(max_norm(differential(s.S())) < 1e-8);
}

TEST_CASE("Clifford torus") {
  const Decay conf = study("clifford-torus", conformality_residual, 1e-12);
  INFO(conf.describe());
  CHECK(conf.at_least_second_order());
  const SurfaceChart s = surface("clifford-torus", 128);
  const double w = willmore_energy(s);
  const EuclideanOracleResult o = euclidean_energy_oracle(s);
  CHECK(w == doctest::Approx(2 * kPi * kPi).epsilon(0.01));
  CHECK(o.energy == doctest::Approx(w).epsilon(0.01));
}

TEST_CASE("catenoid: minimal, with ker A and im Q at the constant line infinity") {
  const Decay h = study("catenoid", [](const SurfaceChart& s) { return mean_curvature_report(s).max_norm; });
  INFO(h.describe());
  CHECK(h.second_order());
  const SurfaceChart s = surface("catenoid", 128);
  const Tolerances tol;
  const double zero = tol.hopf_zero(s.chart().relative_spacing(), max_norm(s.hopf().A) + max_norm(s.hopf().Q));
  const LineField k = kernel_line_field(s.hopf().A, zero, tol.eps_zero, &s.trusted());
  const LineField im = image_line_field(s.hopf().Q, zero, tol.eps_zero, &s.trusted());
  CHECK(max_line_distance(k, s.trusted(), AffineFrame::e()) < 1e-4);
  CHECK(max_line_distance(im, s.trusted(), AffineFrame::e()) < 1e-4);
}

TEST_CASE("holomorphic curve in C^2") {
  const Decay conf = study("holo-curve", conformality_residual, 1e-12);
  CHECK(conf.at_least_second_order());
  const Decay h = study("holo-curve", [](const SurfaceChart& s) { return mean_curvature_report(s).max_norm; });
  INFO(h.describe());
  CHECK(h.second_order());
}

TEST_CASE("twistor projection: the left-j placement is the one with A = 0") {
  const Decay a = study("twistor-cubic", [](const SurfaceChart& s) { return max_norm(s.hopf().A, &s.trusted()); });
  INFO(a.describe());
  CHECK(a.second_order());
  const SurfaceChart left = surface("twistor-cubic", 64);
  CHECK(max_norm(left.hopf().Q, &left.trusted()) > 0.5);
  SurfaceSpec spec;
  const SurfaceChart right = twistor_projection(spec.twistor_h, 64, TwistorConvention::RightJ);
  CHECK(max_norm(right.hopf().Q, &right.trusted()) < 1e-6);
}

TEST_CASE("polynomial evaluation") {
  const ComplexPolynomial p = {1.0, {0.0, 2.0}, 3.0};
  const std::complex<double> z{0.5, -1.0};
  const std::complex<double> expected = 1.0 + std::complex<double>(0, 2) * z + 3.0 * z * z;
  CHECK(std::abs(evaluate(p, z) - expected) < 1e-15);
}

TEST_CASE("oracle: flat patch and round sphere patch have zero energy") {
  const EuclideanSample flat = patch(48, -1, 1, -1, 1, [](double x, double y) { return std::array<double, 4>{x, 2 * y, x - y, 0.0}; });
  CHECK(std::abs(euclidean_energy_oracle(flat).energy) < 1e-10);
  // Inverse stereographic projection onto the unit sphere in R^3.
  const EuclideanSample sphere = patch(96, -0.8, 0.8, -0.8, 0.8, [](double x, double y) {
    const double r = 1.0 + x * x + y * y;
    return std::array<double, 4>{2 * x / r, 2 * y / r, (x * x + y * y - 1) / r, 0.0};
  });
  const EuclideanOracleResult o = euclidean_energy_oracle(sphere);
  CHECK(std::abs(o.energy) < 1e-3 * o.area);
  CHECK(o.mean_curvature_energy == doctest::Approx(o.area).epsilon(1e-3));
}

TEST_CASE("oracle: Clifford torus mean curvature energy matches the closed form 2 pi^2") {
  const EuclideanOracleResult o = euclidean_energy_oracle(surface("clifford-torus", 128));
  CHECK(o.area == doctest::Approx(2 * kPi * kPi).epsilon(1e-3));
  CHECK(o.mean_curvature_energy == doctest::Approx(2 * kPi * kPi).epsilon(0.01));
  CHECK(o.max_mean_curvature == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("oracle and quaternionic energy agree on every gallery surface at 128^2") {
  for (const auto& name : gallery_names()) {
    const SurfaceChart s = surface(name, 128);
    const double w = willmore_energy(s);
    const double o = euclidean_energy_oracle(s).energy;
    INFO(name << ": W = " << w << ", oracle = " << o);
    CHECK(std::abs(w - o) <= 0.02 * std::max(std::abs(o), 0.05));
  }
}
