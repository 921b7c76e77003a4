#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qhess/quaternion.hpp"
#include "qhess/util.hpp"

using namespace qhess;

namespace {

Quaternion random_quat(Rng& rng) {
  return {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
          rng.uniform(-2.0, 2.0)};
}

HyperhermitianMatrix random_hyperhermitian(Rng& rng, int n) {
  HyperhermitianMatrix A(n);
  for (int r = 0; r < n; ++r) {
    A.set(r, r, Quaternion::real(rng.uniform(-2.0, 2.0)));
    for (int c = r + 1; c < n; ++c) A.set(r, c, random_quat(rng));
  }
  return A;
}

}  // namespace

TEST_CASE("hamilton multiplication table") {
  const Quaternion one = Quaternion::real(1.0);
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  auto same = [](Quaternion a, Quaternion b) {
    return a.x0 == b.x0 && a.x1 == b.x1 && a.x2 == b.x2 && a.x3 == b.x3;
  };
  CHECK(same(i * j, k));
  CHECK(same(j * k, i));
  CHECK(same(k * i, j));
  CHECK(same(i * i, -one));
  CHECK(same(j * j, -one));
  CHECK(same(k * k, -one));
  CHECK(same(j * i, -k));
}

TEST_CASE("conjugation and norm are multiplicative") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Quaternion p = random_quat(rng), q = random_quat(rng);
    const Quaternion lhs = conj(p * q);
    const Quaternion rhs = conj(q) * conj(p);
    CHECK(std::abs(lhs.x0 - rhs.x0) < 1e-12);
    CHECK(std::abs(lhs.x1 - rhs.x1) < 1e-12);
    CHECK(std::abs(lhs.x2 - rhs.x2) < 1e-12);
    CHECK(std::abs(lhs.x3 - rhs.x3) < 1e-12);
    CHECK((p * q).norm_sq() == doctest::Approx(p.norm_sq() * q.norm_sq()));
    const Quaternion qq = conj(q) * q;
    CHECK(qq.x0 == doctest::Approx(q.norm_sq()));
    CHECK(std::abs(qq.x1) + std::abs(qq.x2) + std::abs(qq.x3) < 1e-12);
  }
}

TEST_CASE("complex embedding chi is an algebra map") {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const Quaternion p = random_quat(rng), q = random_quat(rng);
    const Eigen::Matrix2cd lhs = embed_chi(p * q);
    const Eigen::Matrix2cd rhs = embed_chi(p) * embed_chi(q);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::Matrix2cd cc = embed_chi(conj(q));
    CHECK((cc - embed_chi(q).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("point embedding tau: conjugate of chi blocks, isometry, quadratic form") {
  Rng rng(13);
  for (int n : {1, 2, 3}) {
    for (int t = 0; t < 5; ++t) {
      const HyperhermitianMatrix A = random_hyperhermitian(rng, n);
      std::vector<double> x(4 * n);
      for (double& xi : x) xi = rng.uniform(-1.0, 1.0);
      const QPoint q = qpoint_from_reals(x);
      const Eigen::MatrixXcd z = embed_tau(q);

      // tau stacks the complex conjugates of the chi blocks
      Eigen::MatrixXcd w(2 * n, 2);
      for (int l = 0; l < n; ++l) w.block<2, 2>(2 * l, 0) = embed_chi(q[l]);
      CHECK((z - w.conjugate()).cwiseAbs().maxCoeff() < 1e-14);

      // columns are orthogonal with squared length |q|^2
      const Eigen::Matrix2cd gram = z.adjoint() * z;
      CHECK((gram - qpoint_norm_sq(q) * Eigen::Matrix2cd::Identity())
                .cwiseAbs()
                .maxCoeff() < 1e-12);

      // quadratic form through the chi embedding of matrix and point
      const Eigen::MatrixXcd Ah = complex_embedding(A);
      const double via_embedding = 0.5 * (w.adjoint() * Ah * w).trace().real();
      CHECK(A.quadratic_form(q) == doctest::Approx(via_embedding).epsilon(1e-10));
    }
  }
}

TEST_CASE("qpoint helpers") {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
  const QPoint q = qpoint_from_reals(x);
  REQUIRE(q.size() == 2);
  CHECK(q[0].x0 == 1);
  CHECK(q[0].x3 == 4);
  CHECK(q[1].x1 == 6);
  CHECK(qpoint_norm_sq(q) == doctest::Approx(1 + 4 + 9 + 16 + 25 + 36 + 49 + 64));
}

TEST_CASE("eigenvalues of diagonal matrices") {
  const HyperhermitianMatrix A = HyperhermitianMatrix::diagonal({3.0, -1.0, 2.0});
  const std::vector<double> ev = hyperhermitian_eigenvalues(A);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == doctest::Approx(3.0));
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(-1.0));
}

TEST_CASE("moore determinant closed form, 1x1 and 2x2") {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    HyperhermitianMatrix A1(1);
    const double a = rng.uniform(-2.0, 2.0);
    A1.set(0, 0, Quaternion::real(a));
    CHECK(moore_det(A1) == doctest::Approx(a));

    HyperhermitianMatrix A2(2);
    const double d0 = rng.uniform(-2.0, 2.0), d1 = rng.uniform(-2.0, 2.0);
    const Quaternion b = random_quat(rng);
    A2.set(0, 0, Quaternion::real(d0));
    A2.set(1, 1, Quaternion::real(d1));
    A2.set(0, 1, b);
    CHECK(moore_det(A2) == doctest::Approx(d0 * d1 - b.norm_sq()).epsilon(1e-9));
  }
}

TEST_CASE("moore determinant squares to the embedding determinant") {
  Rng rng(15);
  for (int n : {2, 3}) {
    for (int t = 0; t < 10; ++t) {
      const HyperhermitianMatrix A = random_hyperhermitian(rng, n);
      const double md = moore_det(A);
      const std::complex<double> de = complex_embedding(A).determinant();
      CHECK(std::abs(de.imag()) < 1e-6 * (1.0 + std::abs(de.real())));
      CHECK(md * md == doctest::Approx(de.real()).epsilon(1e-7));
    }
  }
}

TEST_CASE("moore determinant of diagonal matrices is the product") {
  const HyperhermitianMatrix A = HyperhermitianMatrix::diagonal({2.0, -3.0, 0.5});
  CHECK(moore_det(A) == doctest::Approx(-3.0));
}

TEST_CASE("mixed discriminant: diagonal closed form, symmetry, diagonal slots") {
  // n = 2 diagonal: D(diag(a), diag(b)) = (a1 b2 + a2 b1) / 2.
  const HyperhermitianMatrix A = HyperhermitianMatrix::diagonal({2.0, 5.0});
  const HyperhermitianMatrix B = HyperhermitianMatrix::diagonal({-1.0, 3.0});
  const double dab = mixed_discriminant({A, B});
  CHECK(dab == doctest::Approx((2.0 * 3.0 + 5.0 * (-1.0)) / 2.0));
  CHECK(mixed_discriminant({B, A}) == doctest::Approx(dab));
  CHECK(mixed_discriminant({A, A}) == doctest::Approx(moore_det(A)));

  Rng rng(16);
  const HyperhermitianMatrix C = random_hyperhermitian(rng, 2);
  const HyperhermitianMatrix D = random_hyperhermitian(rng, 2);
  CHECK(mixed_discriminant({C, D}) == doctest::Approx(mixed_discriminant({D, C})));
  CHECK(mixed_discriminant({C, C}) == doctest::Approx(moore_det(C)).epsilon(1e-9));
}

TEST_CASE("mixed discriminant is multilinear in each slot") {
  Rng rng(17);
  const HyperhermitianMatrix A = random_hyperhermitian(rng, 3);
  const HyperhermitianMatrix B = random_hyperhermitian(rng, 3);
  const HyperhermitianMatrix C = random_hyperhermitian(rng, 3);
  const HyperhermitianMatrix D = random_hyperhermitian(rng, 3);
  const double s = 0.7, t = -1.3;
  const HyperhermitianMatrix M = s * A + t * B;
  const double lhs = mixed_discriminant({M, C, D});
  const double rhs =
      s * mixed_discriminant({A, C, D}) + t * mixed_discriminant({B, C, D});
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("hyperhermitian invariants under the set mirror") {
  HyperhermitianMatrix A(2);
  const Quaternion b{1, 2, 3, 4};
  A.set(0, 1, b);
  const Quaternion back = A(1, 0);
  CHECK(back.x0 == 1);
  CHECK(back.x1 == -2);
  CHECK(back.x2 == -3);
  CHECK(back.x3 == -4);
  // entries are measured by the quaternion norm
  CHECK(A.max_abs_entry() == doctest::Approx(std::sqrt(30.0)));
}
