#include "willmore/backlund.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <string>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

template <class F>
double masked_max(const NodeMask* mask, std::size_t size, F&& f) {
  double m = 0.0;
  for (std::size_t n = 0; n < size; ++n) {
    if (mask != nullptr && (*mask)[n] == 0) continue;
    m = std::max(m, f(n));
  }
  return m;
}

NodeMask both(const NodeMask& a, const NodeMask& b) {
  NodeMask out(a.chart(), 0);
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = (a[n] != 0 && b[n] != 0) ? 1 : 0;
  return out;
}

// v v* for a unit vector: the orthogonal projection onto vH.
HMat2 outer(const HVec2& v) {
  return {v.a * v.a.conj(), v.a * v.b.conj(), v.b * v.a.conj(), v.b * v.b.conj()};
}

std::size_t centre_index(const GridChart& c) { return c.index(c.nx / 2, c.ny / 2); }

// Trusted node nearest to the chart centre (scan order breaks ties).
std::size_t reference_node(const GridChart& c, const NodeMask& mask) {
  std::size_t best = centre_index(c);
  long best_d = -1;
  for (int j = 0; j < c.ny; ++j) {
    for (int i = 0; i < c.nx; ++i) {
      if (mask(i, j) == 0) continue;
      const long d = static_cast<long>(i - c.nx / 2) * (i - c.nx / 2) + static_cast<long>(j - c.ny / 2) * (j - c.ny / 2);
      if (best_d < 0 || d < best_d) {
        best_d = d;
        best = c.index(i, j);
      }
    }
  }
  return best;
}

enum class Extraction { Kernel, Image };

LineField extract_lines(const OneForm<HMat2>& B, Extraction kind, double zero_threshold, double eps_zero,
                        const NodeMask* mask) {
  const GridChart& c = B.chart();
  const Field<HMat2> M = Field<HMat2>::generate(c, [&](int i, int j) {
    const HMat2& bx = B.cx(i, j);
    const HMat2& by = B.cy(i, j);
    return kind == Extraction::Kernel ? adjoint(bx) * bx + adjoint(by) * by : bx * adjoint(bx) + by * adjoint(by);
  });
  const double peak = std::sqrt(masked_max(mask, c.size(), [&](std::size_t n) { return M[n].real_trace(); }));
  if (!(peak > zero_threshold)) {
    throw AllZeroError(std::string(kind == Extraction::Kernel ? "A" : "Q") + " vanishes on the chart (max norm " +
                       std::to_string(peak) + ")");
  }

  LineField out{Field<HVec2>(c), Field<double>(c), NodeMask(c, 0), 0};
  const Field<HMat2> P = M.map([&](const HMat2& m) {
    const double t = m.real_trace();
    if (!(std::sqrt(t) >= eps_zero * peak)) return HMat2::zero();
    return kind == Extraction::Kernel ? HMat2::identity() - (1.0 / t) * m : (1.0 / t) * m;
  });

  // One global vector u keeps v = P u smooth; pick the one that stays
  // farthest from the projector's kernel.
  const double r = 1.0 / std::numbers::sqrt2;
  const HVec2 candidates[] = {{Quaternion::one(), {}},
                              {{}, Quaternion::one()},
                              {Quaternion{r}, Quaternion{r}},
                              {Quaternion{r}, Quaternion{0.0, r}},
                              {Quaternion{r}, Quaternion{0.0, 0.0, r}},
                              {Quaternion{r}, Quaternion{0.0, 0.0, 0.0, r}}};
  HVec2 u = candidates[0];
  double best = -1.0;
  for (const HVec2& cand : candidates) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < c.size(); ++n) {
      if ((mask != nullptr && (*mask)[n] == 0) || P[n] == HMat2::zero()) continue;
      worst = std::min(worst, (P[n] * cand).norm());
    }
    if (worst > best) {
      best = worst;
      u = cand;
    }
  }

  for (std::size_t n = 0; n < c.size(); ++n) {
    const HVec2 v = P[n] * u;
    const double len = v.norm();
    if (P[n] == HMat2::zero() || !(len > 1e-12)) {
      out.holes[n] = 1;
      ++out.hole_count;
      continue;
    }
    out.rep[n] = v * (1.0 / len);
    const HMat2& pick = B.cx[n].norm2() >= B.cy[n].norm2() ? B.cx[n] : B.cy[n];
    out.confidence[n] = (kind == Extraction::Kernel ? kernel_line(pick) : image_line(pick)).pivot_ratio;
  }
  if (out.hole_count > 0 && !fill_from_nearest(out.rep, out.holes)) {
    throw AllZeroError("no resolved node to fill the line field from");
  }
  return out;
}

double clearance_from(const LineField& f, const HVec2& p) {
  double m = 1.0;
  for (std::size_t n = 0; n < f.rep.size(); ++n) m = std::min(m, chordal_distance(f.rep[n], p));
  return m;
}

HVec2 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  HVec2 v{{normal(rng), normal(rng), normal(rng), normal(rng)}, {normal(rng), normal(rng), normal(rng), normal(rng)}};
  return v * (1.0 / v.norm());
}

GridChart open_chart(GridChart c) {
  c.kind = ChartKind::DiskRect;
  c.periodic_x = c.periodic_y = false;
  return c;
}

}  // namespace

LineField kernel_line_field(const OneForm<HMat2>& A, double zero_threshold, double eps_zero, const NodeMask* mask) {
  return extract_lines(A, Extraction::Kernel, zero_threshold, eps_zero, mask);
}

LineField image_line_field(const OneForm<HMat2>& Q, double zero_threshold, double eps_zero, const NodeMask* mask) {
  return extract_lines(Q, Extraction::Image, zero_threshold, eps_zero, mask);
}

double max_adjacent_distance(const LineField& f, const NodeMask* mask) {
  const GridChart& c = f.rep.chart();
  auto ok = [&](int i, int j) { return mask == nullptr || (*mask)(i, j) != 0; };
  double m = 0.0;
  for (int j = 0; j < c.ny; ++j) {
    for (int i = 0; i < c.nx; ++i) {
      if (!ok(i, j)) continue;
      const int ip = c.periodic_x ? (i + 1) % c.nx : i + 1;
      const int jp = c.periodic_y ? (j + 1) % c.ny : j + 1;
      if (ip < c.nx && ok(ip, j)) m = std::max(m, chordal_distance(f.rep(i, j), f.rep(ip, j)));
      if (jp < c.ny && ok(i, jp)) m = std::max(m, chordal_distance(f.rep(i, j), f.rep(i, jp)));
    }
  }
  return m;
}

HMat2 normalizing_moebius(const HVec2& p_in) {
  const double len = p_in.norm();
  if (!(len > 0.0)) throw InvalidArgumentError("normalizing transformation of the zero vector");
  const HVec2 p = p_in * (1.0 / len);
  HVec2 q;
  if (p.a.abs() >= p.b.abs()) {
    q = {(-(p.b * qinv(p.a))).conj(), Quaternion::one()};
  } else {
    q = {Quaternion::one(), (-(p.a * qinv(p.b))).conj()};
  }
  q = q * (1.0 / q.norm());
  return adjoint(HMat2::from_columns(p, q));
}

SurfaceChart moebius_apply(const HMat2& G, const SurfaceChart& s) {
  const Field<Quaternion> g = Field<Quaternion>::generate(s.chart(), [&](int i, int j) {
    const HVec2 v = G * HVec2{s.g()(i, j), Quaternion::one()};
    if (!(v.b.abs() > 1e-8 * v.norm())) throw FrameCollisionError("Moebius image of the surface meets infinity");
    return v.a * qinv(v.b);
  });
  return SurfaceChart(g, s.options());
}

Field<HMat2> conjugate_back(const HMat2& G, const Field<HMat2>& B) {
  const HMat2 Gi = inverse(G);
  return B.map([&](const HMat2& b) { return Gi * b * G; });
}

OneForm<HMat2> conjugate_back(const HMat2& G, const OneForm<HMat2>& B) {
  return {conjugate_back(G, B.cx), conjugate_back(G, B.cy)};
}

double frame_clearance(const SurfaceChart& s) {
  double m = 1.0;
  for (const Quaternion& g : s.g().samples()) m = std::min(m, 1.0 / std::sqrt(1.0 + g.norm2()));
  return m;
}

namespace {

// Infinity candidates shared by chart searches: e1, e2, then random points.
HVec2 trial_point(int attempt, std::mt19937_64& rng) {
  if (attempt == 0) return AffineFrame::e();
  if (attempt == 1) return {{}, Quaternion::one()};
  return random_unit(rng);
}

}  // namespace

AffineFrame choose_frame(const SurfaceChart& s, const Tolerances& tol, std::uint64_t seed) {
  const double a = max_norm(s.hopf().A, &s.trusted());
  const double q = max_norm(s.hopf().Q, &s.trusted());
  const LineField kernel = kernel_line_field(s.hopf().A, tol.hopf_zero(s.chart().relative_spacing(), a + q),
                                             tol.eps_zero, &s.trusted());
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < tol.max_chart_attempts; ++attempt) {
    const HVec2 p = trial_point(attempt, rng);
    if (clearance_from(kernel, p) < tol.frame_margin) continue;
    double surface = 1.0;
    for (std::size_t n = 0; n < s.chart().size(); ++n) surface = std::min(surface, chordal_distance(s.psi(n), p));
    if (surface < tol.frame_margin) continue;
    AffineFrame f;
    f.moebius = normalizing_moebius(p);
    f.margin = tol.frame_margin;
    return f;
  }
  throw NoAffineChartError("no point at infinity clears both the surface and ker A");
}

OneStepResult one_step(const SurfaceChart& s, const AffineFrame& frame, const Tolerances& tol) {
  SurfaceChart work = frame.moebius == HMat2::identity() ? s : moebius_apply(frame.moebius, s);
  const double clearance = frame_clearance(work);
  if (clearance < frame.margin) {
    throw FrameCollisionError("surface comes within " + std::to_string(clearance) + " of infinity");
  }
  const GridChart& c = work.chart();
  const OneForm<HMat2>& A = work.hopf().A;
  // dg# = <alpha, *A e>: the (2,1) entries of (*A)_x = A_y and (*A)_y = -A_x.
  OneForm<Quaternion> w{A.cy.map([](const HMat2& m) { return m.m21; }),
                        A.cx.map([](const HMat2& m) { return -m.m21; })};
  const double harmonicity = harmonicity_residual(work).dstar_a;
  PathIntegral pi = path_integrate(w, Node{c.nx / 2, c.ny / 2}, &work.trusted());
  const double allowed = std::max(tol.closedness_factor * harmonicity, tol.closedness_floor * tol.scale);
  if (pi.closedness_defect > allowed) {
    throw NotClosedError("dg# closedness defect " + std::to_string(pi.closedness_defect) + " exceeds " +
                         std::to_string(allowed));
  }
  GridChart sharp_chart = c.closed() || c.periodic_x || c.periodic_y ? open_chart(c) : c;
  sharp_chart.halo = c.halo + work.options().stencil_depth;
  Field<Quaternion> gs(sharp_chart, std::vector<Quaternion>(pi.values.samples().begin(), pi.values.samples().end()));
  std::optional<SurfaceChart> gsharp;
  try {
    gsharp.emplace(gs, work.options());
  } catch (const ChartDegenerateError&) {
  }
  return {std::move(work), std::move(gs), std::move(gsharp), pi.closedness_defect, harmonicity, std::move(pi.periods)};
}

SharpSphereData sharp_sphere_data(const SurfaceChart& s, const LineField& kernel, double margin) {
  const GridChart& c = s.chart();
  SharpSphereData out{Field<Quaternion>(c), Field<Quaternion>(c), Field<Quaternion>(c)};
  for (std::size_t n = 0; n < c.size(); ++n) {
    const HVec2& v = kernel.rep[n];
    if (!(v.b.abs() >= margin * v.norm())) {
      throw BetaSingularError("kernel line comes within " + std::to_string(v.b.abs() / v.norm()) + " of infinity");
    }
    // beta = (1, -c) with c = a b^-1 vanishes on (a, b) and reads 1 on e.
    const Quaternion cn = v.a * qinv(v.b);
    const HMat2& S = s.S()[n];
    out.N[n] = -s.R()[n];
    out.R[n] = S.m11 - cn * S.m21;
    out.H[n] = -2.0 * (s.g()[n] - cn);
  }
  return out;
}

SharpReport sharp_report(const OneStepResult& step, const SharpSphereData& sharp) {
  if (!step.gsharp) throw InvalidArgumentError("g# is constant: no sphere data to compare");
  const SurfaceChart& gs = *step.gsharp;
  const NodeMask& t = gs.trusted();
  const std::size_t size = gs.chart().size();
  const OneForm<Quaternion> dN = differential(Field<Quaternion>(gs.chart(), std::vector<Quaternion>(
                                                                                  sharp.N.samples().begin(),
                                                                                  sharp.N.samples().end())));
  const OneForm<Quaternion>& dg = gs.dg();
  SharpReport r;
  r.n_match = masked_max(&t, size, [&](std::size_t n) { return (gs.N()[n] - sharp.N[n]).abs(); });
  r.r_match = masked_max(&t, size, [&](std::size_t n) { return (gs.R()[n] - sharp.R[n]).abs(); });
  r.square = masked_max(&t, size, [&](std::size_t n) {
    return std::max((sharp.N[n] * sharp.N[n] + Quaternion::one()).abs(),
                    (sharp.R[n] * sharp.R[n] + Quaternion::one()).abs());
  });
  r.frame_relation =
      masked_max(&t, size, [&](std::size_t n) { return (sharp.R[n] * sharp.H[n] - sharp.H[n] * sharp.N[n]).abs(); });
  r.mean_curvature = masked_max(&t, size, [&](std::size_t n) {
    const Quaternion& N = sharp.N[n];
    const Quaternion ex = 2.0 * (dg.cx[n] * sharp.H[n]) - (dN.cx[n] - N * dN.cy[n]);
    const Quaternion ey = 2.0 * (dg.cy[n] * sharp.H[n]) - (dN.cy[n] + N * dN.cx[n]);
    return std::max(ex.abs(), ey.abs());
  });
  r.conformality = masked_max(&t, size, [&](std::size_t n) {
    const Quaternion& R = sharp.R[n];
    const double e = std::max((dg.cy[n] + dg.cx[n] * R).abs(), (-dg.cx[n] + dg.cy[n] * R).abs());
    return e / (dg.cx[n].abs() + dg.cy[n].abs());
  });
  return r;
}

bool hopf_vanishes(const SurfaceChart& s, TransformDirection direction, const Tolerances& tol) {
  const double a = max_norm(s.hopf().A, &s.trusted());
  const double q = max_norm(s.hopf().Q, &s.trusted());
  const double threshold = tol.hopf_zero(s.chart().relative_spacing(), a + q);
  return (direction == TransformDirection::Forward ? a : q) <= threshold;
}

TransformResult backlund_transform(const SurfaceChart& s, TransformDirection direction, const Tolerances& tol,
                                   std::uint64_t seed) {
  const GridChart& c = s.chart();
  const NodeMask& trusted = s.trusted();
  const double a = max_norm(s.hopf().A, &trusted);
  const double q = max_norm(s.hopf().Q, &trusted);
  const double threshold = tol.hopf_zero(c.relative_spacing(), a + q);
  const bool forward = direction == TransformDirection::Forward;

  TransformResult out;
  out.direction = direction;
  out.vanishing_ratio = (a + q) > 0.0 ? (forward ? a : q) / (a + q) : 0.0;
  out.lines = forward ? kernel_line_field(s.hopf().A, threshold, tol.eps_zero, &trusted)
                      : image_line_field(s.hopf().Q, threshold, tol.eps_zero, &trusted);

  out.reference = out.lines.rep[reference_node(c, trusted)];
  out.spread = masked_max(&trusted, c.size(), [&](std::size_t n) {
    return chordal_distance(out.lines.rep[n], out.reference);
  });
  out.constant = out.spread < tol.constant_map_radius(c.relative_spacing());
  if (out.constant) return out;

  const double margin = tol.frame_margin;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < tol.max_chart_attempts; ++attempt) {
    const HVec2 p = trial_point(attempt, rng);
    if (clearance_from(out.lines, p) < margin) continue;
    const HMat2 G = normalizing_moebius(p);
    GridChart chart = c;
    chart.halo = c.halo + s.options().stencil_depth;
    Field<Quaternion> g(chart);
    for (std::size_t n = 0; n < c.size(); ++n) {
      const HVec2 v = G * out.lines.rep[n];
      g[n] = v.a * qinv(v.b);
    }
    out.surface.emplace(std::move(g), s.options());
    out.moebius = G;
    out.attempts = attempt + 1;
    return out;
  }
  throw NoAffineChartError("no affine chart keeps infinity " + std::to_string(margin) + " away after " +
                           std::to_string(tol.max_chart_attempts) + " attempts");
}

TransformResult backlund_forward(const SurfaceChart& s, const Tolerances& tol, std::uint64_t seed) {
  return backlund_transform(s, TransformDirection::Forward, tol, seed);
}

TransformResult backlund_backward(const SurfaceChart& s, const Tolerances& tol, std::uint64_t seed) {
  return backlund_transform(s, TransformDirection::Backward, tol, seed);
}

SphereRelation sphere_relation_residual(const SurfaceChart& s, const TransformResult& t) {
  if (!t.surface) throw InvalidArgumentError("sphere relation needs a non-constant transform");
  const Field<HMat2> St = conjugate_back(t.moebius, t.surface->S());
  const NodeMask& mask = t.surface->trusted();
  const std::size_t size = s.chart().size();
  SphereRelation r;
  r.full = masked_max(&mask, size, [&](std::size_t n) { return (St[n] + s.S()[n]).norm(); });
  r.quotient = masked_max(&mask, size, [&](std::size_t n) {
    const HVec2& u = t.lines.rep[n];
    const HMat2 sum = St[n] + s.S()[n];
    if (t.direction == TransformDirection::Forward) return ((HMat2::identity() - outer(u)) * sum).norm();
    return (sum * u).norm();
  });
  return r;
}

double hopf_swap_residual(const SurfaceChart& s, const TransformResult& t) {
  if (!t.surface) throw InvalidArgumentError("Hopf swap needs a non-constant transform");
  const bool forward = t.direction == TransformDirection::Forward;
  const OneForm<HMat2> moved = conjugate_back(t.moebius, forward ? t.surface->hopf().Q : t.surface->hopf().A);
  const OneForm<HMat2>& original = forward ? s.hopf().A : s.hopf().Q;
  return max_norm(moved - original, &t.surface->trusted());
}

double involution_residual(const SurfaceChart& s, const TransformResult& there, const TransformResult& back) {
  if (!there.surface) throw InvalidArgumentError("involution needs a non-constant transform");
  const HMat2 Gi = inverse(there.moebius);
  const NodeMask& mask = there.surface->trusted();
  return masked_max(&mask, s.chart().size(),
                    [&](std::size_t n) { return chordal_distance(Gi * back.lines.rep[n], s.psi(n)); });
}

DualResult dual_surface(const SurfaceChart& s, const Tolerances& tol) {
  const Field<Quaternion> gp = s.g().map([](const Quaternion& g) {
    if (!(g.abs() > 1e-8)) throw FrameCollisionError("dual surface: the surface passes through 0");
    return -(g / g.norm2());
  });
  SurfaceChart dual(gp, s.options());
  const NodeMask mask = both(dual.trusted(), s.trusted());
  const std::size_t size = s.chart().size();
  DualResult r{std::move(dual), 0.0, 0.0};
  r.adjoint = masked_max(&mask, size, [&](std::size_t n) { return (r.dual.S()[n] - adjoint(s.S()[n])).norm(); });
  const double h = s.chart().relative_spacing();
  const double scale_d = max_norm(r.dual.hopf().A, &mask) + max_norm(r.dual.hopf().Q, &mask);
  const double scale_s = max_norm(s.hopf().A, &mask) + max_norm(s.hopf().Q, &mask);
  const LineField k = kernel_line_field(r.dual.hopf().A, tol.hopf_zero(h, scale_d), tol.eps_zero, &mask);
  const LineField q = image_line_field(s.hopf().Q, tol.hopf_zero(h, scale_s), tol.eps_zero, &mask);
  r.kernel_image = masked_max(&mask, size, [&](std::size_t n) { return hermitian(k.rep[n], q.rep[n]).abs(); });
  return r;
}

}  // namespace willmore
