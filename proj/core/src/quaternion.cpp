#include "willmore/quaternion.hpp"

#include <algorithm>
#include <array>
#include <ostream>

#include "willmore/errors.hpp"

namespace willmore {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

std::ostream& operator<<(std::ostream& os, const HVec2& v) { return os << '[' << v.a << "; " << v.b << ']'; }

std::ostream& operator<<(std::ostream& os, const HMat2& m) {
  return os << "[[" << m.m11 << ", " << m.m12 << "], [" << m.m21 << ", " << m.m22 << "]]";
}

Quaternion qinv(const Quaternion& q, double eps) {
  const double n2 = q.norm2();
  if (!(std::sqrt(n2) >= eps) || n2 == 0.0) {
    throw ZeroDivisorError("quaternion inverse of a value with magnitude below threshold");
  }
  return q.conj() / n2;
}

std::optional<Quaternion> unit_imaginary(const Quaternion& q) {
  const Quaternion v = q.imag();
  const double n = v.abs();
  if (!(n > 0.0)) return std::nullopt;
  return v / n;
}

namespace {

HMat2 swap_rows(const HMat2& m) { return {m.m21, m.m22, m.m11, m.m12}; }
HMat2 swap_cols(const HMat2& m) { return {m.m12, m.m11, m.m22, m.m21}; }

const Quaternion& entry(const HMat2& m, int r, int c) {
  if (r == 0) return c == 0 ? m.m11 : m.m12;
  return c == 0 ? m.m21 : m.m22;
}

struct Pivot {
  int row = 0;
  int col = 0;
  double magnitude = 0.0;
};

Pivot largest_entry(const HMat2& m) {
  Pivot best;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double a = entry(m, r, c).abs();
      if (a > best.magnitude) best = {r, c, a};
    }
  }
  return best;
}

struct Elimination {
  Pivot pivot;
  Quaternion pivot_inverse;
  Quaternion schur;  // remaining entry after eliminating the pivot column
};

Elimination eliminate(const HMat2& b) {
  Elimination e;
  e.pivot = largest_entry(b);
  if (e.pivot.magnitude == 0.0) return e;
  const int r = e.pivot.row, c = e.pivot.col, ro = 1 - r, co = 1 - c;
  e.pivot_inverse = qinv(entry(b, r, c));
  e.schur = entry(b, ro, co) - entry(b, ro, c) * e.pivot_inverse * entry(b, r, co);
  return e;
}

}  // namespace

HMat2 inverse(const HMat2& m, double eps) {
  const Pivot p = largest_entry(m);
  if (p.magnitude == 0.0) throw ZeroDivisorError("inverse of the zero matrix");
  HMat2 mp = m;
  if (p.row == 1) mp = swap_rows(mp);
  if (p.col == 1) mp = swap_cols(mp);
  const Quaternion ai = qinv(mp.m11);
  const Quaternion s = mp.m22 - mp.m21 * ai * mp.m12;
  if (s.abs() < eps * p.magnitude) throw ZeroDivisorError("inverse of a singular matrix");
  const Quaternion si = qinv(s);
  HMat2 inv{ai + ai * mp.m12 * si * mp.m21 * ai, -(ai * mp.m12 * si), -(si * mp.m21 * ai), si};
  // m = Pr m' Pc  =>  m^-1 = Pc m'^-1 Pr
  if (p.col == 1) inv = swap_rows(inv);
  if (p.row == 1) inv = swap_cols(inv);
  return inv;
}

ProjPoint::ProjPoint(const HVec2& v) {
  const double na = v.a.abs();
  const double nb = v.b.abs();
  if (!(na > 0.0) && !(nb > 0.0)) throw InvalidArgumentError("ProjPoint from the zero vector");
  if (std::max(na, nb) <= 2.0 * std::min(na, nb)) {
    rep_ = v * (1.0 / v.norm());
  } else if (na > nb) {
    rep_ = v * qinv(v.a);
    rep_.a = Quaternion::one();
  } else {
    rep_ = v * qinv(v.b);
    rep_.b = Quaternion::one();
  }
}

HVec2 ProjPoint::unit() const { return rep_ * (1.0 / rep_.norm()); }

std::optional<Quaternion> ProjPoint::affine_coordinate() const {
  if (rep_.b.abs() <= 1e-300) return std::nullopt;
  return rep_.a * qinv(rep_.b);
}

double chordal_distance(const HVec2& u, const HVec2& v) {
  const double nu = u.norm2();
  const double nv = v.norm2();
  if (!(nu > 0.0) || !(nv > 0.0)) throw InvalidArgumentError("chordal distance of a zero vector");
  // |u - v <v, u> / |v|^2| / |u|: the sine of the angle, without cancellation.
  const HVec2 r = u - v * (hermitian(v, u) * (1.0 / nv));
  return std::min(1.0, std::sqrt(r.norm2() / nu));
}

double chordal_distance(const ProjPoint& p, const ProjPoint& q) { return chordal_distance(p.rep(), q.rep()); }

bool same_line(const ProjPoint& p, const ProjPoint& q, double tol) { return chordal_distance(p, q) <= tol; }

LineExtraction kernel_line(const HMat2& b, double eps) {
  const Elimination e = eliminate(b);
  LineExtraction out;
  if (e.pivot.magnitude == 0.0) return out;
  out.pivot_ratio = e.schur.abs() / e.pivot.magnitude;
  if (out.pivot_ratio >= eps) {
    out.rank = 2;
    return out;
  }
  out.rank = 1;
  const int r = e.pivot.row, c = e.pivot.col, co = 1 - c;
  // B[r][c] v_c + B[r][co] v_co = 0 with v_co = 1.
  const Quaternion vc = -(e.pivot_inverse * entry(b, r, co));
  HVec2 v;
  (c == 0 ? v.a : v.b) = vc;
  (co == 0 ? v.a : v.b) = Quaternion::one();
  out.line = ProjPoint(v);
  return out;
}

LineExtraction image_line(const HMat2& b, double eps) {
  const Elimination e = eliminate(b);
  LineExtraction out;
  if (e.pivot.magnitude == 0.0) return out;
  out.pivot_ratio = e.schur.abs() / e.pivot.magnitude;
  if (out.pivot_ratio >= eps) {
    out.rank = 2;
    return out;
  }
  out.rank = 1;
  out.line = ProjPoint(e.pivot.col == 0 ? b.column1() : b.column2());
  return out;
}

}  // namespace willmore
