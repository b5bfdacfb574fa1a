#pragma once

// Quaternions H and the right H-module H^2.
//
// Convention: i^2 = j^2 = k^2 = -1, ij = k. Vectors in H^2 carry a right
// scalar action v*lambda = (a*lambda, b*lambda); 2x2 quaternionic matrices
// act from the left and therefore commute with that action. Lines in H^2
// (points of HP^1) are right submodules v*H.

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>

namespace willmore {

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double abs() const { return std::sqrt(norm2()); }
  constexpr double real() const { return w; }
  constexpr Quaternion imag() const { return {0.0, x, y, z}; }

  constexpr Quaternion& operator+=(const Quaternion& q) {
    w += q.w;
    x += q.x;
    y += q.y;
    z += q.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& q) {
    w -= q.w;
    x -= q.x;
    y -= q.y;
    z -= q.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s;
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
  friend constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
  friend constexpr Quaternion operator-(const Quaternion& q) { return {-q.w, -q.x, -q.y, -q.z}; }
  friend constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
  friend constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }
  friend constexpr Quaternion operator/(Quaternion q, double s) { return q *= (1.0 / s); }

  /// Hamilton product.
  friend constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// Default magnitude below which a quaternion counts as a zero divisor.
inline constexpr double kZeroDivisorEps = std::numeric_limits<double>::min();

/// Default relative threshold for the second pivot in rank detection.
inline constexpr double kRankEps = 1e-9;

constexpr Quaternion qmul(const Quaternion& p, const Quaternion& q) { return p * q; }

/// q^-1 = conj(q) / |q|^2. Throws ZeroDivisorError when |q| < eps.
Quaternion qinv(const Quaternion& q, double eps = kZeroDivisorEps);

/// Nearest unit imaginary quaternion; nullopt when the imaginary part vanishes.
std::optional<Quaternion> unit_imaginary(const Quaternion& q);

/// Complex number a + ib placed in span{1, i}.
constexpr Quaternion from_complex(double re, double im) { return {re, im, 0.0, 0.0}; }

struct HVec2 {
  Quaternion a;
  Quaternion b;

  constexpr HVec2& operator+=(const HVec2& v) {
    a += v.a;
    b += v.b;
    return *this;
  }
  constexpr HVec2& operator-=(const HVec2& v) {
    a -= v.a;
    b -= v.b;
    return *this;
  }
  constexpr HVec2& operator*=(double s) {
    a *= s;
    b *= s;
    return *this;
  }
  friend constexpr HVec2 operator+(HVec2 u, const HVec2& v) { return u += v; }
  friend constexpr HVec2 operator-(HVec2 u, const HVec2& v) { return u -= v; }
  friend constexpr HVec2 operator-(const HVec2& v) { return {-v.a, -v.b}; }
  friend constexpr HVec2 operator*(HVec2 v, double s) { return v *= s; }
  friend constexpr HVec2 operator*(double s, HVec2 v) { return v *= s; }
  /// Right scalar action.
  friend constexpr HVec2 operator*(const HVec2& v, const Quaternion& l) { return {v.a * l, v.b * l}; }

  constexpr double norm2() const { return a.norm2() + b.norm2(); }
  double norm() const { return std::sqrt(norm2()); }

  friend constexpr bool operator==(const HVec2&, const HVec2&) = default;
};

/// Standard quaternionic hermitian form <u, v> = conj(u.a) v.a + conj(u.b) v.b.
constexpr Quaternion hermitian(const HVec2& u, const HVec2& v) {
  return u.a.conj() * v.a + u.b.conj() * v.b;
}

struct HMat2 {
  Quaternion m11;
  Quaternion m12;
  Quaternion m21;
  Quaternion m22;

  static constexpr HMat2 identity() { return {Quaternion::one(), {}, {}, Quaternion::one()}; }
  static constexpr HMat2 zero() { return {}; }
  static constexpr HMat2 scalar(const Quaternion& q) { return {q, {}, {}, q}; }
  /// Matrix with the given columns.
  static constexpr HMat2 from_columns(const HVec2& c1, const HVec2& c2) { return {c1.a, c2.a, c1.b, c2.b}; }

  constexpr HVec2 column1() const { return {m11, m21}; }
  constexpr HVec2 column2() const { return {m12, m22}; }

  constexpr HMat2& operator+=(const HMat2& m) {
    m11 += m.m11;
    m12 += m.m12;
    m21 += m.m21;
    m22 += m.m22;
    return *this;
  }
  constexpr HMat2& operator-=(const HMat2& m) {
    m11 -= m.m11;
    m12 -= m.m12;
    m21 -= m.m21;
    m22 -= m.m22;
    return *this;
  }
  constexpr HMat2& operator*=(double s) {
    m11 *= s;
    m12 *= s;
    m21 *= s;
    m22 *= s;
    return *this;
  }
  friend constexpr HMat2 operator+(HMat2 p, const HMat2& q) { return p += q; }
  friend constexpr HMat2 operator-(HMat2 p, const HMat2& q) { return p -= q; }
  friend constexpr HMat2 operator-(const HMat2& m) { return {-m.m11, -m.m12, -m.m21, -m.m22}; }
  friend constexpr HMat2 operator*(HMat2 m, double s) { return m *= s; }
  friend constexpr HMat2 operator*(double s, HMat2 m) { return m *= s; }

  friend constexpr HMat2 operator*(const HMat2& p, const HMat2& q) {
    return {p.m11 * q.m11 + p.m12 * q.m21, p.m11 * q.m12 + p.m12 * q.m22,
            p.m21 * q.m11 + p.m22 * q.m21, p.m21 * q.m12 + p.m22 * q.m22};
  }
  friend constexpr HVec2 operator*(const HMat2& m, const HVec2& v) {
    return {m.m11 * v.a + m.m12 * v.b, m.m21 * v.a + m.m22 * v.b};
  }

  /// Sum of squared coefficients of all entries.
  constexpr double norm2() const { return m11.norm2() + m12.norm2() + m21.norm2() + m22.norm2(); }
  double norm() const { return std::sqrt(norm2()); }
  /// Real trace form <B> = Re(B11 + B22).
  constexpr double real_trace() const { return m11.w + m22.w; }

  friend constexpr bool operator==(const HMat2&, const HMat2&) = default;
};

/// Conjugate transpose; (BC)* = C* B*.
constexpr HMat2 adjoint(const HMat2& m) { return {m.m11.conj(), m.m21.conj(), m.m12.conj(), m.m22.conj()}; }

/// Inverse of an invertible 2x2 quaternionic matrix (pivoted elimination).
HMat2 inverse(const HMat2& m, double eps = kRankEps);

std::ostream& operator<<(std::ostream& os, const HVec2& v);
std::ostream& operator<<(std::ostream& os, const HMat2& m);

/// A point of HP^1: the right line v*H spanned by a nonzero vector.
class ProjPoint {
 public:
  /// Throws InvalidArgumentError for the zero vector.
  explicit ProjPoint(const HVec2& v);

  static ProjPoint infinity() { return ProjPoint(HVec2{Quaternion::one(), {}}); }
  /// The affine point (g, 1)^T H.
  static ProjPoint affine(const Quaternion& g) { return ProjPoint(HVec2{g, Quaternion::one()}); }

  /// Normalized representative (see normalize()).
  const HVec2& rep() const { return rep_; }
  /// Unit-norm representative.
  HVec2 unit() const;
  /// Affine coordinate a*b^-1 in the chart with infinity = (1,0)^T H.
  std::optional<Quaternion> affine_coordinate() const;

 private:
  HVec2 rep_;
};

/// sqrt(1 - |<u,v>|^2) for unit representatives; invariant under right scaling.
double chordal_distance(const ProjPoint& p, const ProjPoint& q);
double chordal_distance(const HVec2& u, const HVec2& v);

/// Equality of lines up to the chordal tolerance.
bool same_line(const ProjPoint& p, const ProjPoint& q, double tol = 1e-10);

struct LineExtraction {
  int rank = 0;
  std::optional<ProjPoint> line;
  /// |second pivot| / |first pivot|; 0 for rank <= 1 exact, 1 for well-conditioned rank 2.
  double pivot_ratio = 0.0;
};

/// Kernel of a rank-one matrix by pivoted elimination over H.
LineExtraction kernel_line(const HMat2& b, double eps = kRankEps);
/// Column span of a rank-one matrix.
LineExtraction image_line(const HMat2& b, double eps = kRankEps);

}  // namespace willmore
