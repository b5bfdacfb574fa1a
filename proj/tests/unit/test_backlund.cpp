#include <doctest.h>

#include <cmath>
#include <map>

#include "../support/convergence.hpp"
#include "willmore/backlund.hpp"
#include "willmore/errors.hpp"
#include "willmore/gallery.hpp"

using namespace willmore;
using willmore::testing::Decay;

namespace {

const SurfaceChart& gallery(const std::string& name, int res) {
  static std::map<std::pair<std::string, int>, SurfaceChart> cache;
  const auto key = std::make_pair(name, res);
  auto it = cache.find(key);
  if (it == cache.end()) {
    SurfaceSpec spec;
    spec.name = name;
    spec.resolution = res;
    it = cache.emplace(key, make_surface(spec)).first;
  }
  return it->second;
}

template <class F>
Decay study(const std::string& name, F f, double floor = 1e-8, std::vector<int> res = {32, 64, 128}) {
  Decay d;
  d.floor = floor;
  for (int n : res) d.values.push_back(f(gallery(name, n)));
  return d;
}

const std::vector<int> kTorusRes = {64, 128, 256};

double zero_threshold(const SurfaceChart& s) {
  const Tolerances tol;
  return tol.hopf_zero(s.chart().relative_spacing(), max_norm(s.hopf().A, &s.trusted()) + max_norm(s.hopf().Q, &s.trusted()));
}

HVec2 unit(const HVec2& v) { return v * (1.0 / v.norm()); }

}  // namespace

TEST_CASE("one-step transform of the round sphere is constant") {
  const OneStepResult r = one_step(gallery("round-sphere", 32));
  CHECK(max_norm(r.values) == 0.0);
  CHECK_FALSE(r.gsharp);
}

TEST_CASE("one-step transform of the catenoid is conformal") {
  const Decay conf = study("catenoid", [](const SurfaceChart& s) {
    const OneStepResult r = one_step(s, choose_frame(s));
    REQUIRE(r.gsharp);
    return conformality_residual(*r.gsharp);
  }, 1e-8, {64, 128, 256});
  INFO(conf.describe());
  CHECK(conf.at_least_second_order());
  CHECK(conf.values[2] < 2e-3);
}

TEST_CASE("one-step transform of the Clifford torus reports both periods") {
  const OneStepResult r = one_step(gallery("clifford-torus", 64));
  CHECK(r.periods.size() == 2);
  CHECK(r.closedness_defect <= std::max(10 * r.harmonicity, 1e-9));
  REQUIRE(r.gsharp);
  CHECK_FALSE(r.gsharp->chart().closed());
}

TEST_CASE("sharp sphere data agrees with the normals of g#") {
  auto sharp = [](const SurfaceChart& s) {
    const OneStepResult r = one_step(s, choose_frame(s));
    const LineField k = kernel_line_field(r.source.hopf().A, zero_threshold(r.source), 1e-5, &r.source.trusted());
    return sharp_report(r, sharp_sphere_data(r.source, k));
  };
  const Decay n = study("clifford-torus-inverted", [&](const SurfaceChart& s) { return sharp(s).n_match; }, 1e-8, kTorusRes);
  const Decay rr = study("clifford-torus-inverted", [&](const SurfaceChart& s) { return sharp(s).r_match; }, 1e-8, kTorusRes);
  const Decay mc = study("clifford-torus-inverted", [&](const SurfaceChart& s) { return sharp(s).mean_curvature; }, 1e-8, kTorusRes);
  const Decay fr = study("clifford-torus-inverted", [&](const SurfaceChart& s) { return sharp(s).frame_relation; }, 1e-8, kTorusRes);
  INFO("N " << n.describe() << " | R " << rr.describe() << " | mean " << mc.describe() << " | frame " << fr.describe());
  CHECK(n.at_least_second_order());
  CHECK(rr.at_least_second_order());
  CHECK(mc.at_least_second_order());
  CHECK(fr.at_least_second_order());
  const SharpReport r = sharp(gallery("clifford-torus-inverted", 128));
  CHECK(r.square < 1e-2);
}

TEST_CASE("beta is singular when ker A passes through infinity") {
  const SurfaceChart& s = gallery("catenoid", 32);
  const LineField k = kernel_line_field(s.hopf().A, zero_threshold(s), 1e-5, &s.trusted());
  CHECK_THROWS_AS(sharp_sphere_data(s, k), BetaSingularError);
  CHECK_FALSE(choose_frame(s).moebius == HMat2::identity());
}

TEST_CASE("closedness and frame errors") {
  const SurfaceChart& s = gallery("clifford-torus-inverted", 32);
  Tolerances strict;
  strict.closedness_factor = 1e-6;
  strict.closedness_floor = 0.0;
  CHECK_THROWS_AS(one_step(s, AffineFrame{}, strict), NotClosedError);
  CHECK_THROWS_AS(moebius_apply(normalizing_moebius(s.psi(17)), s), FrameCollisionError);
  Tolerances none;
  none.max_chart_attempts = 0;
  CHECK_THROWS_AS(choose_frame(s, none), NoAffineChartError);
}

TEST_CASE("line fields: all-zero signals and continuity") {
  const SurfaceChart& tw = gallery("twistor-cubic", 64);
  CHECK_THROWS_AS(kernel_line_field(tw.hopf().A, zero_threshold(tw), 1e-5, &tw.trusted()), AllZeroError);
  CHECK_THROWS_AS(backlund_forward(tw), AllZeroError);
  const SurfaceChart& rs = gallery("round-sphere", 32);
  CHECK_THROWS_AS(image_line_field(rs.hopf().Q, zero_threshold(rs), 1e-5, &rs.trusted()), AllZeroError);
  CHECK_THROWS_AS(backlund_backward(rs), AllZeroError);
  const SurfaceChart& cl = gallery("clifford-torus", 64);
  const LineField im = image_line_field(cl.hopf().Q, zero_threshold(cl), 1e-5);
  CHECK(max_adjacent_distance(im) < 0.5);
  const LineField ker = kernel_line_field(cl.hopf().A, zero_threshold(cl), 1e-5);
  CHECK(max_adjacent_distance(ker) < 0.5);
}

TEST_CASE("a planted zero of A is filled with the analytic kernel") {
  const GridChart c = GridChart::rect(33, 33, -1, 1, -1, 1);
  const Quaternion k = Quaternion::k();
  // Rank one with kernel (1, -k)^T H, scaled by the coordinates from the left.
  const HMat2 m{k, Quaternion::one(), Quaternion::j() * k, Quaternion::j()};
  const OneForm<HMat2> a{Field<HMat2>::generate(c, [&](int i, int) { return HMat2::scalar(Quaternion(c.x(i), 0.3 * c.x(i))) * m; }),
                         Field<HMat2>::generate(c, [&](int, int j) { return HMat2::scalar(Quaternion(c.y(j))) * m; })};
  const LineField f = kernel_line_field(a, 1e-12, 1e-5);
  CHECK(f.hole_count >= 1);
  CHECK(f.holes(16, 16) == 1);
  const HVec2 expected{Quaternion::one(), -k};
  CHECK(chordal_distance(f.rep(16, 16), expected) < 1e-2);
  double worst = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) worst = std::max(worst, chordal_distance(f.rep[n], expected));
  CHECK(worst < 1e-10);
}

TEST_CASE("catenoid transforms are constant at infinity") {
  const SurfaceChart& s = gallery("catenoid", 128);
  for (const TransformResult& t : {backlund_forward(s), backlund_backward(s)}) {
    CHECK(t.constant);
    CHECK_FALSE(t.surface);
    CHECK(chordal_distance(t.reference, AffineFrame::e()) < 1e-4);
  }
}

TEST_CASE("forward and backward transform identities on the Clifford tori") {
  for (const char* name : {"clifford-torus", "clifford-torus-inverted"}) {
    const Decay swap = study(name, [](const SurfaceChart& s) { return hopf_swap_residual(s, backlund_forward(s)); }, 1e-8, kTorusRes);
    const Decay bswap = study(name, [](const SurfaceChart& s) { return hopf_swap_residual(s, backlund_backward(s)); }, 1e-8, kTorusRes);
    const Decay rel = study(name, [](const SurfaceChart& s) { return sphere_relation_residual(s, backlund_forward(s)).quotient; }, 1e-8, kTorusRes);
    const Decay harm = study(name, [](const SurfaceChart& s) {
      const HarmonicityReport h = harmonicity_residual(*backlund_forward(s).surface);
      return std::max(h.dstar_a, h.dstar_q);
    }, 1e-8, kTorusRes);
    INFO(name << ": swap " << swap.describe() << " | back " << bswap.describe() << " | rel " << rel.describe()
              << " | harm " << harm.describe());
    CHECK(swap.at_least_second_order());
    CHECK(bswap.at_least_second_order());
    CHECK(rel.at_least_second_order());
    CHECK(harm.at_least_second_order());
  }
}

TEST_CASE("backward of forward returns the surface") {
  for (int n : kTorusRes) {
    const SurfaceChart& s = gallery("clifford-torus-inverted", n);
    const TransformResult f = backlund_forward(s);
    REQUIRE(f.surface);
    const TransformResult b = backlund_backward(*f.surface);
    const double h = s.chart().hx;
    CHECK(involution_residual(s, f, b) < 5 * h * h);
  }
}

TEST_CASE("twistor backward transform has S^ = -S on all of H^2") {
  const Decay full = study("twistor-cubic", [](const SurfaceChart& s) { return sphere_relation_residual(s, backlund_backward(s)).full; });
  INFO(full.describe());
  CHECK(full.second_order());
}

TEST_CASE("dual surface") {
  const SurfaceChart& s = gallery("clifford-torus-inverted", 64);
  const DualResult d = dual_surface(s);
  CHECK(structure_residuals(d.dual).s_squared < 1e-10);
  for (std::size_t n = 0; n < s.chart().size(); ++n) {
    const HMat2 adj = adjoint(s.S()[n]);
    REQUIRE((adj * adj + HMat2::identity()).norm() < 1e-10);
  }
  const DualResult dd = dual_surface(d.dual);
  double back = 0.0;
  for (std::size_t n = 0; n < s.chart().size(); ++n) back = std::max(back, chordal_distance(dd.dual.psi(n), s.psi(n)));
  CHECK(back < 1e-10);
  const Decay ki = study("clifford-torus-inverted", [](const SurfaceChart& x) { return dual_surface(x).kernel_image; }, 1e-8, kTorusRes);
  const Decay adjr = study("clifford-torus-inverted", [](const SurfaceChart& x) { return dual_surface(x).adjoint; }, 1e-8, kTorusRes);
  INFO(ki.describe() << " | " << adjr.describe());
  CHECK(ki.second_order());
  CHECK(adjr.second_order());
  CHECK(study("clifford-torus", [](const SurfaceChart& x) { return dual_surface(x).kernel_image; }).at_floor());
}

TEST_CASE("Moebius changes of chart") {
  const SurfaceChart& s = gallery("clifford-torus-inverted", 32);
  const SurfaceChart same = moebius_apply(HMat2::identity(), s);
  for (std::size_t n = 0; n < s.chart().size(); ++n) REQUIRE(same.g()[n] == s.g()[n]);
  const HMat2 g{Quaternion(1, 0.2), Quaternion(0, 0, 0.3), Quaternion(0.1, 0, 0, 0.4), Quaternion(0.9, 0.1)};
  const SurfaceChart there = moebius_apply(g, s);
  const SurfaceChart back = moebius_apply(inverse(g), there);
  double d = 0.0;
  for (std::size_t n = 0; n < s.chart().size(); ++n) d = std::max(d, (back.g()[n] - s.g()[n]).abs());
  CHECK(d < 1e-10);
  const HVec2 p = unit(HVec2{Quaternion(0.3, 1), Quaternion(0.5, 0, 2)});
  const HVec2 moved = normalizing_moebius(p) * p;
  CHECK(moved.b.abs() < 1e-14);
}

TEST_CASE("inverting the catenoid at its constant transform point leaves it minimal") {
  const Decay h = study("catenoid", [](const SurfaceChart& s) {
    const TransformResult t = backlund_forward(s);
    return mean_curvature_report(moebius_apply(normalizing_moebius(t.reference), s)).max_norm;
  });
  INFO(h.describe());
  CHECK(h.second_order());
}
