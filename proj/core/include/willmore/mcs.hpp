#pragma once

// Mean curvature sphere congruence of a conformal map g: M -> H, read as the
// affine chart f = (g, 1)^T H of a map into HP^1.
//
// Frame: psi = (g, 1)^T spans L, e = (1, 0)^T spans the point at infinity and
// alpha reads the second component. S is the complex structure with
// S psi = -psi R and S e = e N - psi H.

#include <cstddef>
#include <optional>

#include "willmore/chart.hpp"
#include "willmore/quaternion.hpp"

namespace willmore {

struct McsOptions {
  /// Branch nodes: |g_x| below this fraction of the chart-wide max |g_x|.
  double branch_eps = 1e-6;
  /// More than this fraction of branch nodes raises ChartDegenerateError.
  double max_branch_fraction = 0.2;
  /// Nesting depth of finite differences behind the deepest residual; nodes
  /// closer than halo + depth to a non-periodic edge are not reported.
  int stencil_depth = 4;
};

struct HopfData {
  OneForm<HMat2> A;
  OneForm<HMat2> Q;
  /// -(A + Q): d + nablahat_form is the connection that S is parallel for.
  OneForm<HMat2> nablahat_form;
};

/// A + Q = S dS / 2 and Q - A = *dS / 2, with dS sampled by `differential`.
HopfData hopf_fields(const Field<HMat2>& S);

/// S from its frame actions; the closed form holds for any N, R, H.
HMat2 sphere_from_frame(const Quaternion& g, const Quaternion& N, const Quaternion& R, const Quaternion& H);

class SurfaceChart {
 public:
  /// Computes every cached quantity. Throws ChartDegenerateError when the
  /// branch mask covers too much of the chart.
  explicit SurfaceChart(Field<Quaternion> g, const McsOptions& options = {});

  const GridChart& chart() const { return g_.chart(); }
  const McsOptions& options() const { return options_; }
  const Field<Quaternion>& g() const { return g_; }
  const OneForm<Quaternion>& dg() const { return dg_; }
  const Field<Quaternion>& N() const { return N_; }
  const Field<Quaternion>& R() const { return R_; }
  /// Mean curvature projected onto R H = H N.
  const Field<Quaternion>& H() const { return H_; }
  /// Mean curvature straight from the x-evaluation of 2 dg H = dN - N*dN.
  const Field<Quaternion>& H_raw() const { return H_raw_; }
  const Field<HMat2>& S() const { return S_; }
  const HopfData& hopf() const { return hopf_; }

  /// 1 where |g_x| is negligible (values there are filled from neighbours).
  const NodeMask& branch_mask() const { return branch_; }
  std::size_t branch_count() const { return branch_count_; }
  /// 1 where residual norms are meaningful: deep enough inside the chart and
  /// away from branch nodes.
  const NodeMask& trusted() const { return trusted_; }

  /// psi = (g, 1)^T.
  HVec2 psi(std::size_t n) const { return {g_[n], Quaternion::one()}; }

 private:
  McsOptions options_;
  Field<Quaternion> g_;
  OneForm<Quaternion> dg_;
  Field<Quaternion> N_, R_, H_raw_, H_;
  Field<HMat2> S_;
  HopfData hopf_;
  NodeMask branch_;
  NodeMask trusted_;
  std::size_t branch_count_ = 0;
};

/// max |g_y - N g_x|, |g_y + g_x R| relative to |g_x| + |g_y| on trusted nodes.
double conformality_residual(const SurfaceChart& s);

struct MeanCurvatureReport {
  double max_norm = 0.0;
  /// |2 g_y H - (N_y + N N_x)|: the y-evaluation of the defining identity.
  double y_consistency = 0.0;
  /// |R H_raw - H_raw N| before projection.
  double frame_relation = 0.0;
  /// |R H - N R| with the projected H. Reported, not expected to vanish.
  double rh_nr = 0.0;
};
MeanCurvatureReport mean_curvature_report(const SurfaceChart& s);

struct StructureReport {
  double s_squared = 0.0;        // |S^2 + 1|, every node
  double extraction = 0.0;       // |S dS / 2 - (A + Q)|
  double dS_split = 0.0;         // |dS - 2 *(Q - A)|
  double q_psi = 0.0;            // |Q psi|: L in ker Q
  double im_a_in_l = 0.0;        // component of A-image vectors orthogonal to L
  double star_a_sa = 0.0;        // |*A - S A|
  double star_a_as = 0.0;        // |*A + A S|
  double star_q_sq = 0.0;        // |*Q + S Q|
  double star_q_qs = 0.0;        // |*Q - Q S|
  double a_norm = 0.0;
  double q_norm = 0.0;
};
StructureReport structure_residuals(const SurfaceChart& s);

struct HarmonicityReport {
  double dstar_a = 0.0;
  double dstar_q = 0.0;
  double dnabla_a = 0.0;
  double dnabla_q = 0.0;
};
HarmonicityReport harmonicity_residual(const HopfData& hd, const NodeMask* mask = nullptr);
HarmonicityReport harmonicity_residual(const SurfaceChart& s);

/// Pointwise -<A_x^2 + A_y^2>, the dx^dy coefficient of <A ^ *A>.
Field<double> willmore_density(const HopfData& hd);
/// 2 * integral of <A ^ *A>; over trusted nodes on charts with edges.
double willmore_energy(const SurfaceChart& s);

struct DegreeReport {
  double degree = 0.0;
  /// Nearest integer (closed charts only).
  std::optional<long> rounded;
  double rounding_defect = 0.0;
  /// Rounding defect above 0.05.
  bool warning = false;
  /// Integral over trusted nodes of a chart with edges.
  bool chart_restricted = false;
};
/// (1/2pi) integral of <S (d w + w ^ w)> with w = nablahat_form.
DegreeReport degree(const SurfaceChart& s);

/// max |dR + R *dR - 4 <alpha, *A psi>| on trusted nodes.
double normal_identity_check(const SurfaceChart& s);

}  // namespace willmore
