#pragma once

// Closed-form conformal test surfaces sampled onto grid charts.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "willmore/mcs.hpp"

namespace willmore {

using ComplexPolynomial = std::vector<std::complex<double>>;  // coefficients, constant term first

/// Placement of the quaternion j in the twistor lift (h1 + j h2 vs h1 + h2 j).
enum class TwistorConvention { LeftJ, RightJ };

struct SurfaceSpec {
  std::string name = "clifford-torus";
  int resolution = 64;
  double umax = 1.5;                                          // catenoid
  ComplexPolynomial holo_p = {0.0, 0.0, 1.0};                  // holo-curve: z + j p(z)
  std::array<ComplexPolynomial, 4> twistor_h = {ComplexPolynomial{1.0}, ComplexPolynomial{0.0, 1.0},
                                                ComplexPolynomial{0.0, 0.0, 1.0},
                                                ComplexPolynomial{0.0, 0.0, 0.0, 1.0}};
  TwistorConvention twistor_convention = TwistorConvention::LeftJ;
  Quaternion inversion_center{0.15, 0.1, 0.05, -0.1};        // clifford-torus-inverted
  double control_amplitude = 0.2;                             // non-willmore-control
};

/// Names accepted by make_surface, in documentation order.
const std::vector<std::string>& gallery_names();

/// Throws InvalidArgumentError for unknown names or resolution < 8.
SurfaceChart make_surface(const SurfaceSpec& spec, const McsOptions& options = {});

/// g(z) = z on [-1, 1]^2: a planar piece of a round sphere.
SurfaceChart round_sphere(int res, const McsOptions& options = {});
/// (cos u + i sin u + j cos v + k sin v) / sqrt 2 on [0, 2pi)^2.
SurfaceChart clifford_torus(int res, const McsOptions& options = {});
/// The Clifford torus followed by g -> (g - c)^-1: Willmore, not minimal.
SurfaceChart clifford_torus_inverted(int res, const Quaternion& c, const McsOptions& options = {});
/// cosh u cos v i + cosh u sin v j + u k on [-umax, umax] x [0, 2pi).
SurfaceChart catenoid_patch(int res, double umax = 1.5, const McsOptions& options = {});
/// z + j p(z) on [-1, 1]^2.
SurfaceChart holo_curve_c2(const ComplexPolynomial& p, int res, const McsOptions& options = {});
/// Affine chart of the line (h1 + j h2, h3 + j h4)^T H over [1.5, 2.5] x [-0.5, 0.5].
SurfaceChart twistor_projection(const std::array<ComplexPolynomial, 4>& h, int res,
                                TwistorConvention convention = TwistorConvention::LeftJ,
                                const McsOptions& options = {});
/// z + a (Re z)^2 j on [-1, 1]^2: conformal to first order only, not Willmore.
SurfaceChart non_willmore_control(int res, double amplitude = 0.2, const McsOptions& options = {});

std::complex<double> evaluate(const ComplexPolynomial& p, std::complex<double> z);

}  // namespace willmore
