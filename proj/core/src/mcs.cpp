#include "willmore/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "willmore/errors.hpp"

namespace willmore {

namespace {

// Max over trusted nodes of f(n), for f returning a magnitude.
template <class F>
double masked_max(const NodeMask& mask, F&& f) {
  const GridChart& c = mask.chart();
  std::vector<double> rows(static_cast<std::size_t>(c.ny), 0.0);
  parallel_for(rows.size(), [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j) {
      double m = 0.0;
      for (int i = 0; i < c.nx; ++i) {
        const std::size_t n = c.index(i, static_cast<int>(j));
        if (mask[n] != 0) m = std::max(m, f(n));
      }
      rows[j] = m;
    }
  });
  return *std::max_element(rows.begin(), rows.end());
}

NodeMask dilate(const NodeMask& m, int radius) {
  const GridChart& c = m.chart();
  return NodeMask::generate(c, [&](int i, int j) -> std::uint8_t {
    for (int dj = -radius; dj <= radius; ++dj) {
      for (int di = -radius; di <= radius; ++di) {
        int ii = i + di, jj = j + dj;
        if (c.periodic_x) ii = (ii % c.nx + c.nx) % c.nx;
        if (c.periodic_y) jj = (jj % c.ny + c.ny) % c.ny;
        if (ii < 0 || ii >= c.nx || jj < 0 || jj >= c.ny) continue;
        if (m(ii, jj) != 0) return 1;
      }
    }
    return 0;
  });
}

}  // namespace

HMat2 sphere_from_frame(const Quaternion& g, const Quaternion& N, const Quaternion& R, const Quaternion& H) {
  return {N - g * H, -(g * R) - N * g + g * H * g, -H, -R + H * g};
}

HopfData hopf_fields(const Field<HMat2>& S) {
  const OneForm<HMat2> dS = differential(S);
  const GridChart& c = S.chart();
  HopfData hd{{Field<HMat2>(c), Field<HMat2>(c)}, {Field<HMat2>(c), Field<HMat2>(c)}, {}};
  parallel_for(S.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const HMat2 sx = S[n] * dS.cx[n];
      const HMat2 sy = S[n] * dS.cy[n];
      // *dS = (dS_y, -dS_x)
      hd.A.cx[n] = 0.25 * (sx + dS.cy[n]);
      hd.A.cy[n] = 0.25 * (sy - dS.cx[n]);
      hd.Q.cx[n] = 0.25 * (sx - dS.cy[n]);
      hd.Q.cy[n] = 0.25 * (sy + dS.cx[n]);
    }
  });
  hd.nablahat_form = -1.0 * (hd.A + hd.Q);
  return hd;
}

SurfaceChart::SurfaceChart(Field<Quaternion> g, const McsOptions& options) : options_(options), g_(std::move(g)) {
  const GridChart& c = g_.chart();
  c.validate();
  dg_ = differential(g_);

  const double scale = max_norm(dg_.cx);
  N_ = Field<Quaternion>(c);
  R_ = Field<Quaternion>(c);
  branch_ = NodeMask(c, 0);
  parallel_for(c.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const Quaternion& gx = dg_.cx[n];
      const Quaternion& gy = dg_.cy[n];
      if (!(scale > 0.0) || gx.abs() < options_.branch_eps * scale) {
        branch_[n] = 1;
        continue;
      }
      const Quaternion gxi = qinv(gx);
      const auto n_unit = unit_imaginary(gy * gxi);
      const auto r_unit = unit_imaginary(-(gxi * gy));
      if (!n_unit || !r_unit) {
        branch_[n] = 1;
        continue;
      }
      N_[n] = *n_unit;
      R_[n] = *r_unit;
    }
  });
  for (std::size_t n = 0; n < c.size(); ++n) branch_count_ += branch_[n];
  if (static_cast<double>(branch_count_) > options_.max_branch_fraction * static_cast<double>(c.size())) {
    throw ChartDegenerateError("branch mask covers " + std::to_string(branch_count_) + " of " +
                               std::to_string(c.size()) + " nodes");
  }
  if (branch_count_ > 0) {
    fill_from_nearest(N_, branch_);
    fill_from_nearest(R_, branch_);
  }

  const OneForm<Quaternion> dN = differential(N_);
  H_raw_ = Field<Quaternion>(c);
  parallel_for(c.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      if (branch_[n] != 0) continue;
      H_raw_[n] = 0.5 * (qinv(dg_.cx[n]) * (dN.cx[n] - N_[n] * dN.cy[n]));
    }
  });
  if (branch_count_ > 0) fill_from_nearest(H_raw_, branch_);
  H_ = Field<Quaternion>(c);
  S_ = Field<HMat2>(c);
  parallel_for(c.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const Quaternion& h = H_raw_[n];
      H_[n] = 0.5 * (h - R_[n] * h * N_[n]);
      S_[n] = sphere_from_frame(g_[n], N_[n], R_[n], H_[n]);
    }
  });
  hopf_ = hopf_fields(S_);

  const int depth = options_.stencil_depth;
  const NodeMask near_branch = branch_count_ > 0 ? dilate(branch_, depth) : NodeMask(c, 0);
  trusted_ = NodeMask::generate(c, [&](int i, int j) -> std::uint8_t {
    return c.boundary_distance(i, j) >= c.halo + depth && near_branch(i, j) == 0 ? 1 : 0;
  });
}

double conformality_residual(const SurfaceChart& s) {
  return masked_max(s.trusted(), [&](std::size_t n) {
    const Quaternion& gx = s.dg().cx[n];
    const Quaternion& gy = s.dg().cy[n];
    const double r = std::max((gy - s.N()[n] * gx).abs(), (gy + gx * s.R()[n]).abs());
    return r / (gx.abs() + gy.abs());
  });
}

MeanCurvatureReport mean_curvature_report(const SurfaceChart& s) {
  const OneForm<Quaternion> dN = differential(s.N());
  MeanCurvatureReport out;
  out.max_norm = max_norm(s.H(), &s.trusted());
  out.y_consistency = masked_max(s.trusted(), [&](std::size_t n) {
    return (2.0 * (s.dg().cy[n] * s.H()[n]) - (dN.cy[n] + s.N()[n] * dN.cx[n])).abs();
  });
  out.frame_relation = masked_max(s.trusted(), [&](std::size_t n) {
    return (s.R()[n] * s.H_raw()[n] - s.H_raw()[n] * s.N()[n]).abs();
  });
  out.rh_nr = masked_max(s.trusted(), [&](std::size_t n) { return (s.R()[n] * s.H()[n] - s.N()[n] * s.R()[n]).abs(); });
  return out;
}

StructureReport structure_residuals(const SurfaceChart& s) {
  const HopfData& hd = s.hopf();
  const Field<HMat2>& S = s.S();
  const OneForm<HMat2> dS = differential(S);
  const NodeMask& t = s.trusted();
  StructureReport r;
  r.s_squared = max_norm(S.map([](const HMat2& m) { return m * m + HMat2::identity(); }));
  r.extraction = masked_max(t, [&](std::size_t n) {
    const HMat2 ex = 0.5 * (S[n] * dS.cx[n]) - (hd.A.cx[n] + hd.Q.cx[n]);
    const HMat2 ey = 0.5 * (S[n] * dS.cy[n]) - (hd.A.cy[n] + hd.Q.cy[n]);
    return std::max(ex.norm(), ey.norm());
  });
  r.dS_split = masked_max(t, [&](std::size_t n) {
    // 2 *(Q - A): x -> 2 (Q - A)_y, y -> -2 (Q - A)_x
    const HMat2 ex = dS.cx[n] - 2.0 * (hd.Q.cy[n] - hd.A.cy[n]);
    const HMat2 ey = dS.cy[n] + 2.0 * (hd.Q.cx[n] - hd.A.cx[n]);
    return std::max(ex.norm(), ey.norm());
  });
  r.q_psi = masked_max(t, [&](std::size_t n) {
    const HVec2 p = s.psi(n);
    return std::max((hd.Q.cx[n] * p).norm(), (hd.Q.cy[n] * p).norm());
  });
  r.im_a_in_l = masked_max(t, [&](std::size_t n) {
    const HVec2 p = s.psi(n);
    const HVec2 u = p * (1.0 / p.norm());
    double m = 0.0;
    for (const HMat2* a : {&hd.A.cx[n], &hd.A.cy[n]}) {
      for (const HVec2& v : {a->column1(), a->column2()}) m = std::max(m, (v - u * hermitian(u, v)).norm());
    }
    return m;
  });
  auto pair_max = [&](auto&& fx, auto&& fy) {
    return masked_max(t, [&](std::size_t n) { return std::max(fx(n).norm(), fy(n).norm()); });
  };
  const auto& A = hd.A;
  const auto& Q = hd.Q;
  r.star_a_sa = pair_max([&](std::size_t n) { return A.cy[n] - S[n] * A.cx[n]; },
                         [&](std::size_t n) { return -A.cx[n] - S[n] * A.cy[n]; });
  r.star_a_as = pair_max([&](std::size_t n) { return A.cy[n] + A.cx[n] * S[n]; },
                         [&](std::size_t n) { return -A.cx[n] + A.cy[n] * S[n]; });
  r.star_q_sq = pair_max([&](std::size_t n) { return Q.cy[n] + S[n] * Q.cx[n]; },
                         [&](std::size_t n) { return -Q.cx[n] + S[n] * Q.cy[n]; });
  r.star_q_qs = pair_max([&](std::size_t n) { return Q.cy[n] - Q.cx[n] * S[n]; },
                         [&](std::size_t n) { return -Q.cx[n] - Q.cy[n] * S[n]; });
  r.a_norm = max_norm(A, &t);
  r.q_norm = max_norm(Q, &t);
  return r;
}

HarmonicityReport harmonicity_residual(const HopfData& hd, const NodeMask* mask) {
  const OneForm<HMat2>& w = hd.nablahat_form;
  auto covariant = [&](const OneForm<HMat2>& b) { return exterior_d(b) + wedge(w, b) + wedge(b, w); };
  HarmonicityReport r;
  r.dstar_a = max_norm(exterior_d(star(hd.A)), mask);
  r.dstar_q = max_norm(exterior_d(star(hd.Q)), mask);
  r.dnabla_a = max_norm(covariant(hd.A), mask);
  r.dnabla_q = max_norm(covariant(hd.Q), mask);
  return r;
}

HarmonicityReport harmonicity_residual(const SurfaceChart& s) { return harmonicity_residual(s.hopf(), &s.trusted()); }

Field<double> willmore_density(const HopfData& hd) {
  return Field<double>::generate(hd.A.chart(), [&](int i, int j) {
    const HMat2& ax = hd.A.cx(i, j);
    const HMat2& ay = hd.A.cy(i, j);
    return -(ax * ax + ay * ay).real_trace();
  });
}

double willmore_energy(const SurfaceChart& s) {
  const Field<double> rho = willmore_density(s.hopf());
  return 2.0 * (s.chart().closed() ? integrate(rho) : integrate(rho, &s.trusted()));
}

DegreeReport degree(const SurfaceChart& s) {
  const Field<HMat2> curvature = connection_curvature(s.hopf().nablahat_form);
  const Field<double> rho =
      Field<double>::generate(s.chart(), [&](int i, int j) { return (s.S()(i, j) * curvature(i, j)).real_trace(); });
  DegreeReport r;
  if (s.chart().closed()) {
    r.degree = integrate(rho) / (2.0 * std::numbers::pi);
    r.rounded = std::lround(r.degree);
    r.rounding_defect = std::abs(r.degree - static_cast<double>(*r.rounded));
    r.warning = r.rounding_defect > 0.05;
  } else {
    r.degree = integrate(rho, &s.trusted()) / (2.0 * std::numbers::pi);
    r.chart_restricted = true;
  }
  return r;
}

double normal_identity_check(const SurfaceChart& s) {
  const OneForm<Quaternion> dR = differential(s.R());
  const HopfData& hd = s.hopf();
  return masked_max(s.trusted(), [&](std::size_t n) {
    const HVec2 p = s.psi(n);
    const Quaternion& R = s.R()[n];
    // *dR = (R_y, -R_x); *A psi = (A_y psi, -A_x psi)
    const Quaternion rx = dR.cx[n] + R * dR.cy[n] - 4.0 * (hd.A.cy[n] * p).b;
    const Quaternion ry = dR.cy[n] - R * dR.cx[n] + 4.0 * (hd.A.cx[n] * p).b;
    return std::max(rx.abs(), ry.abs());
  });
}

}  // namespace willmore
