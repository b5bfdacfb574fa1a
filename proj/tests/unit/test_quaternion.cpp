#include <doctest.h>

#include <random>

#include "willmore/errors.hpp"
#include "willmore/quaternion.hpp"

using namespace willmore;

namespace {

double dist(const Quaternion& p, const Quaternion& q) { return (p - q).abs(); }
double dist(const HMat2& p, const HMat2& q) { return (p - q).norm(); }

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng), n(rng), n(rng)};
}

HMat2 random_matrix(std::mt19937_64& rng) {
  return {random_quaternion(rng), random_quaternion(rng), random_quaternion(rng), random_quaternion(rng)};
}

const Quaternion I = Quaternion::i(), J = Quaternion::j(), K = Quaternion::k(), ONE = Quaternion::one();

}  // namespace

TEST_CASE("Hamilton product follows ij = k") {
  CHECK(I * J == K);
  CHECK(J * K == I);
  CHECK(K * I == J);
  CHECK(J * I == -K);
  for (const auto& u : {I, J, K}) CHECK(u * u == -ONE);
  CHECK((ONE + I) * (ONE + J) == Quaternion(1, 1, 1, 1));
  const Quaternion q(2, 1, 0, -3);
  CHECK(dist(q * qinv(q), ONE) < 1e-15);
  CHECK(dist(qinv(q) * q, ONE) < 1e-15);
}

TEST_CASE("inverse of a quaternion") {
  CHECK(qinv(I) == -I);
  CHECK(qinv(Quaternion(2)) == Quaternion(0.5));
  const Quaternion q(1, 1, 1, 1);
  CHECK(dist(qinv(q), Quaternion(1, -1, -1, -1) * 0.25) < 1e-16);
  CHECK(dist(q * qinv(q), ONE) < 1e-15);
  CHECK_THROWS_AS(qinv(Quaternion()), ZeroDivisorError);
  CHECK_THROWS_AS(qinv(Quaternion(1e-9), 1e-6), ZeroDivisorError);
}

TEST_CASE("norm is multiplicative and the product associative on random samples") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const Quaternion p = random_quaternion(rng), q = random_quaternion(rng), r = random_quaternion(rng);
    CHECK(std::abs((p * q).abs() - p.abs() * q.abs()) <= 1e-12 * p.abs() * q.abs());
    CHECK(dist((p * q) * r, p * (q * r)) < 1e-12 * (1 + p.abs() * q.abs() * r.abs()));
    CHECK(dist(q * q.conj(), Quaternion(q.norm2())) < 1e-12 * q.norm2());
  }
}

TEST_CASE("matrices act on the left and commute with the right scalar action") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const HMat2 b = random_matrix(rng), c = random_matrix(rng);
    const HVec2 v{random_quaternion(rng), random_quaternion(rng)};
    const Quaternion l = random_quaternion(rng);
    const HVec2 lhs = (b * c) * v, rhs = b * (c * v);
    CHECK((lhs - rhs).norm() < 1e-12 * (1 + lhs.norm()));
    const HVec2 s1 = (b * v) * l, s2 = b * (v * l);
    CHECK((s1 - s2).norm() < 1e-12 * (1 + s1.norm()));
  }
}

TEST_CASE("kernel line of rank-one matrices") {
  const HMat2 e11{ONE, {}, {}, {}};
  const auto k = kernel_line(e11);
  CHECK(k.rank == 1);
  REQUIRE(k.line);
  CHECK(same_line(*k.line, ProjPoint(HVec2{{}, ONE})));

  CHECK(kernel_line(HMat2::zero()).rank == 0);
  CHECK_FALSE(kernel_line(HMat2::zero()).line);
  CHECK(kernel_line(HMat2::identity()).rank == 2);
  CHECK_FALSE(kernel_line(HMat2::identity()).line);

  // u (alpha .) with u = (1, j)^T and alpha = (k, 1): kernel (1, -k)^T H.
  const HMat2 b{K, ONE, J * K, J};
  const auto kb = kernel_line(b);
  CHECK(kb.rank == 1);
  REQUIRE(kb.line);
  CHECK(same_line(*kb.line, ProjPoint(HVec2{ONE, -K})));
  CHECK((b * kb.line->rep()).norm() < 1e-12);
}

TEST_CASE("image line of rank-one matrices") {
  const HMat2 e11{ONE, {}, {}, {}};
  REQUIRE(image_line(e11).line);
  CHECK(same_line(*image_line(e11).line, ProjPoint::infinity()));
  const HMat2 b{J, J * K, ONE, K};
  const auto ib = image_line(b);
  CHECK(ib.rank == 1);
  REQUIRE(ib.line);
  CHECK(same_line(*ib.line, ProjPoint(HVec2{J, ONE})));
  CHECK(image_line(HMat2::identity()).rank == 2);
}

TEST_CASE("kernel of planted rank-one structure annihilates within 1e-10 of the norm") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    const HVec2 u{random_quaternion(rng), random_quaternion(rng)};
    const Quaternion a1 = random_quaternion(rng), a2 = random_quaternion(rng);
    const HMat2 b{u.a * a1, u.a * a2, u.b * a1, u.b * a2};
    const auto k = kernel_line(b);
    REQUIRE(k.rank == 1);
    REQUIRE(k.line);
    CHECK((b * k.line->unit()).norm() < 1e-10 * b.norm());
    const auto im = image_line(b);
    REQUIRE(im.line);
    CHECK(same_line(*im.line, ProjPoint(u), 1e-10));
  }
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
  CHECK(adjoint(HMat2::identity()) == HMat2::identity());
  CHECK(adjoint(HMat2::scalar(I)) == HMat2::scalar(-I));
  std::mt19937_64 rng(5);
  for (int n = 0; n < 100; ++n) {
    const HMat2 b = random_matrix(rng), c = random_matrix(rng);
    CHECK(adjoint(adjoint(b)) == b);
    CHECK(dist(adjoint(b * c), adjoint(c) * adjoint(b)) < 1e-12 * (1 + b.norm() * c.norm()));
  }
  const HMat2 s0{I, J, {}, I};
  CHECK(dist(s0 * s0, -HMat2::identity()) < 1e-15);
  const HMat2 t = random_matrix(rng);
  const HMat2 s = t * s0 * inverse(t);
  CHECK(dist(s * s, -HMat2::identity()) < 1e-10);
  CHECK(dist(adjoint(s) * adjoint(s), -HMat2::identity()) < 1e-10);
}

TEST_CASE("projective points are invariant under right scaling") {
  std::mt19937_64 rng(9);
  const HVec2 v{random_quaternion(rng), random_quaternion(rng)};
  const ProjPoint p(v);
  for (int n = 0; n < 100; ++n) {
    const Quaternion l = random_quaternion(rng);
    CHECK(same_line(p, ProjPoint(v * l), 1e-10));
    CHECK(chordal_distance(p, ProjPoint(v * l)) < 1e-12);
  }
  CHECK(chordal_distance(ProjPoint::infinity(), ProjPoint::affine({})) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ProjPoint(HVec2{}), InvalidArgumentError);
}

TEST_CASE("matrix inverse") {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 50; ++n) {
    const HMat2 b = random_matrix(rng);
    CHECK(dist(b * inverse(b), HMat2::identity()) < 1e-9);
  }
}
