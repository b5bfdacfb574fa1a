#pragma once

// Transforms of a Willmore surface: the forward and backward transforms
// spanned by ker A and im Q, the 1-step transform g# obtained by integrating
// <alpha, *A e>, the dual surface and Moebius changes of chart.

#include <cstdint>
#include <optional>
#include <vector>

#include "willmore/mcs.hpp"
#include "willmore/tolerances.hpp"

namespace willmore {

/// Point at infinity eH and the covector alpha with <alpha, e> = 0. The chart
/// is first moved by `moebius` (psi -> G psi); e = (1, 0)^T and alpha reads
/// the second component in the moved chart.
struct AffineFrame {
  HMat2 moebius = HMat2::identity();
  double margin = 0.05;

  static HVec2 e() { return {Quaternion::one(), {}}; }
  static Quaternion alpha(const HVec2& v) { return v.b; }
};

/// A field of lines with unit representatives chosen to vary smoothly.
struct LineField {
  Field<HVec2> rep;
  /// Second-pivot ratio of the pointwise rank detection (0 = exactly rank one).
  Field<double> confidence;
  /// Nodes where the Hopf field vanished and the line was filled in.
  NodeMask holes;
  std::size_t hole_count = 0;

  ProjPoint line(std::size_t n) const { return ProjPoint(rep[n]); }
};

/// Line field of ker A, taken from the smooth projector
/// I - (A_x* A_x + A_y* A_y) / tr. Nodes where |A| < eps_zero * max|A| are
/// holes filled from the nearest resolved node. Throws AllZeroError if
/// max|A| over `mask` is at most zero_threshold.
LineField kernel_line_field(const OneForm<HMat2>& A, double zero_threshold, double eps_zero = 1e-5,
                            const NodeMask* mask = nullptr);
/// Line field of im Q from the projector (Q_x Q_x* + Q_y Q_y*) / tr.
LineField image_line_field(const OneForm<HMat2>& Q, double zero_threshold, double eps_zero = 1e-5,
                           const NodeMask* mask = nullptr);

/// Largest chordal distance between neighbouring nodes of the field.
double max_adjacent_distance(const LineField& f, const NodeMask* mask = nullptr);

/// Unitary G with G p = e lambda: moves the point p to infinity, isometrically.
HMat2 normalizing_moebius(const HVec2& p);

/// Surface with lines G (g, 1)^T H. Throws FrameCollisionError when a node
/// lands on infinity.
SurfaceChart moebius_apply(const HMat2& G, const SurfaceChart& s);

/// Field<HMat2> B -> G^-1 B G and the same on 1-forms: brings endomorphisms
/// computed in a moved chart back to base coordinates.
Field<HMat2> conjugate_back(const HMat2& G, const Field<HMat2>& B);
OneForm<HMat2> conjugate_back(const HMat2& G, const OneForm<HMat2>& B);

/// Smallest chordal distance between the surface and the frame's infinity.
double frame_clearance(const SurfaceChart& s);

/// Frame for the 1-step transform: tries infinity at (1,0)^T, (0,1)^T and
/// then seeded random points until both the surface and ker A stay
/// tol.frame_margin away from it. Throws NoAffineChartError otherwise.
AffineFrame choose_frame(const SurfaceChart& s, const Tolerances& tol = {}, std::uint64_t seed = 0);

struct OneStepResult {
  SurfaceChart source;  // the surface in the frame's chart
  Field<Quaternion> values;  // integrated g#, 0 at the centre node
  /// Surface of g#; empty when g# is constant (degenerate everywhere).
  std::optional<SurfaceChart> gsharp;
  double closedness_defect = 0.0;
  double harmonicity = 0.0;
  std::vector<Quaternion> periods;
};

/// Integrates dg# = <alpha, *A e> from the centre node. On closed charts
/// g# lives on the same nodes without periodic identification. Throws
/// FrameCollisionError (margin) or NotClosedError (defect above
/// tol.closedness_factor times the harmonicity residual).
OneStepResult one_step(const SurfaceChart& s, const AffineFrame& frame = {}, const Tolerances& tol = {});

struct SharpSphereData {
  Field<Quaternion> N;
  Field<Quaternion> R;
  Field<Quaternion> H;
};

/// N# = -R, R# = <beta, S e>, H# = -2 <beta, psi> with <beta, e> = 1 and
/// beta vanishing on `kernel`. Throws BetaSingularError when the kernel line
/// comes within `margin` of infinity.
SharpSphereData sharp_sphere_data(const SurfaceChart& s, const LineField& kernel, double margin = 0.05);

struct SharpReport {
  double n_match = 0.0;        // |N(g#) - N#|
  double r_match = 0.0;        // |R(g#) - R#|
  double square = 0.0;         // max(|N#^2 + 1|, |R#^2 + 1|)
  double frame_relation = 0.0; // |R# H# - H# N#|
  double mean_curvature = 0.0; // |2 dg# H# - (dN# - N# *dN#)|
  double conformality = 0.0;   // |*dg# + dg# R#| relative to |dg#|
};
/// Throws InvalidArgumentError when g# is constant.
SharpReport sharp_report(const OneStepResult& step, const SharpSphereData& sharp);

enum class TransformDirection { Forward, Backward };

struct TransformResult {
  TransformDirection direction = TransformDirection::Forward;
  /// Lines of the transform in base coordinates.
  LineField lines;
  /// Max chordal distance of the lines from the reference node's line.
  double spread = 0.0;
  bool constant = false;
  HVec2 reference;
  /// Affine chart of the transform; empty when it is constant.
  std::optional<SurfaceChart> surface;
  /// Chart coordinates = moebius * base coordinates.
  HMat2 moebius = HMat2::identity();
  int attempts = 0;
  /// max|A| / (max|A| + max|Q|) (forward) or the same with Q (backward).
  double vanishing_ratio = 0.0;
};

/// Transform spanned by ker A (forward) or im Q (backward). Throws
/// AllZeroError when the Hopf field vanishes and NoAffineChartError when no
/// trial chart keeps infinity off the transform.
TransformResult backlund_transform(const SurfaceChart& s, TransformDirection direction, const Tolerances& tol = {},
                                   std::uint64_t seed = 0);
TransformResult backlund_forward(const SurfaceChart& s, const Tolerances& tol = {}, std::uint64_t seed = 0);
TransformResult backlund_backward(const SurfaceChart& s, const Tolerances& tol = {}, std::uint64_t seed = 0);

/// Whether the Hopf field of the given direction counts as identically zero.
bool hopf_vanishes(const SurfaceChart& s, TransformDirection direction, const Tolerances& tol = {});

struct SphereRelation {
  /// Forward: |P (S~ + S)| with P the orthogonal projection off L~.
  /// Backward: |(S^ + S) v| for unit v in L^.
  double quotient = 0.0;
  /// |S' + S| on the whole space.
  double full = 0.0;
};
SphereRelation sphere_relation_residual(const SurfaceChart& s, const TransformResult& t);

/// |Q~ - A| (forward) or |A^ - Q| (backward) in base coordinates, on the
/// transform's trusted nodes.
double hopf_swap_residual(const SurfaceChart& s, const TransformResult& t);

/// Max chordal distance between the lines of `s` and the lines of `back`
/// (base coordinates of `t`'s transform) on `back`'s trusted nodes.
double involution_residual(const SurfaceChart& s, const TransformResult& there, const TransformResult& back);

struct DualResult {
  SurfaceChart dual;
  /// |S(g_perp) - S*|.
  double adjoint = 0.0;
  /// max |<k, q>| for unit k in ker A_perp and q in im Q.
  double kernel_image = 0.0;
};
/// The dual surface: lines annihilated by (g, 1)^T under the hermitian
/// pairing, i.e. g_perp = -g / |g|^2.
DualResult dual_surface(const SurfaceChart& s, const Tolerances& tol = {});

}  // namespace willmore
