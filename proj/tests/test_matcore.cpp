#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crsing/matcore.hpp"
#include "test_util.hpp"

using namespace crsing;
using crsing::testing::random_cmat;
using crsing::testing::random_symmetric;

TEST_CASE("rank examples") {
  CHECK(rank(CMat::zeros(2, 2)) == 0);
  CHECK(rank(CMat{{1, 0}, {0, 0}}) == 1);
  // det [[0,1],[0.5,0]] = -0.5, so full rank.
  CHECK(rank(CMat{{0, 1}, {0.5, 0}}) == 2);
}

TEST_CASE("rank is relative to the largest singular value") {
  CMat m{{1e6, 0}, {0, 1e-4}};
  CHECK(rank(m) == 1);
  m.set_tol(1e-11);
  CHECK(rank(m) == 2);
}

TEST_CASE("hermitian signature examples") {
  auto s = hermitian_signature(CMat::identity(4));
  CHECK(s.p == 4);
  CHECK(s.q == 0);
  s = hermitian_signature(CMat::diag({1.0, -1.0}));
  CHECK(s.p == 1);
  CHECK(s.q == 1);
  CHECK(s.rank == 2);
  // Gamma(I, diag(0,2)) has eigenvalues 1,1 from the first pair and 1+-2.
  s = hermitian_signature(build_gamma(CMat::identity(2), CMat::diag({0.0, 2.0})));
  CHECK(s.rank == 4);
  CHECK(std::abs(s.p - s.q) == 2);
  CHECK_THROWS_AS(hermitian_signature(CMat{{0, 1}, {0, 0}}), Error);
}

TEST_CASE("takagi examples") {
  auto t = takagi(CMat::zeros(2, 2));
  CHECK(dist(t.U, CMat::identity(2)) == 0.0);
  CHECK(t.D.norm() == 0.0);

  // Singular values of the swap matrix: {1, 1}.
  t = takagi(CMat{{0, 1}, {1, 0}});
  CHECK(t.D(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.D(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist(t.U * t.D * t.U.transpose(), CMat{{0, 1}, {1, 0}}) < 1e-12);

  t = takagi(CMat::diag({3.0, 2.0}));
  CHECK(t.D(0, 0).real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(t.D(1, 1).real() == doctest::Approx(2.0).epsilon(1e-12));
  // U is a phase/permutation matrix here.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double a = std::abs(t.U(i, j));
      CHECK((a < 1e-12 || std::abs(a - 1.0) < 1e-12));
    }

  CHECK_THROWS_AS(takagi(CMat{{0, 1}, {2, 0}}), Error);
}

TEST_CASE("takagi rank-deficient and repeated singular values") {
  const CMat u{{1, 1}, {1, 1}};
  auto t = takagi(u);
  CHECK(t.D(1, 1).real() == 0.0);
  CHECK(dist(t.U * t.D * t.U.transpose(), u) < 1e-12);
  CHECK(dist(t.U * t.U.adjoint(), CMat::identity(2)) < 1e-12);

  const CMat rep = CMat::diag({cplx(0, 2), cplx(-2, 0), 2.0});
  t = takagi(rep);
  CHECK(dist(t.U * t.D * t.U.transpose(), rep) < 1e-12);
  CHECK(dist(t.U * t.U.adjoint(), CMat::identity(3)) < 1e-12);
}

TEST_CASE("takagi property: singular values and unitarity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + std::size_t(trial % 3);
    const CMat s = random_symmetric(rng, n);
    const auto t = takagi(s);
    const auto sv = singular_values(s);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(t.D(k, k).real() - sv[k]) <= 1e-10 * (1 + sv[0]));
      CHECK(t.D(k, k).imag() == 0.0);
    }
    CHECK(dist(t.U * t.U.adjoint(), CMat::identity(n)) <= 1e-10);
    CHECK(dist(t.U * t.D * t.U.transpose(), s) <= 1e-10 * (1 + s.norm()));
  }
}

TEST_CASE("congruence actions") {
  std::mt19937_64 rng(5);
  const CMat m = random_cmat(rng, 2, 2);
  CHECK(dist(star_congruence(1.0, CMat::identity(2), m), m) == 0.0);
  const double lam = 1.7;
  const CMat a = cplx(lam) * CMat::identity(2);
  CHECK(dist(star_congruence(1.0 / (lam * lam), a, m), m) < 1e-14);
  const double phi = 0.83;
  const CMat ph = CMat::diag({std::polar(1.0, phi), 1.0});
  const CMat d = CMat::diag({0.4, -2.5});
  CHECK(dist(star_congruence(1.0, ph, d), d) < 1e-15);
  CHECK_THROWS_AS(star_congruence(1.0, CMat::identity(3), m), Error);
  CHECK_THROWS_AS(sym_congruence(1.0, CMat::identity(3), m), Error);
}

TEST_CASE("gamma examples") {
  const CMat g = build_gamma(CMat{{1.0}}, CMat{{0.6}});
  CHECK(dist(g, CMat{{1, 0.6}, {0.6, 1}}) == 0.0);
  CHECK(build_gamma(CMat::zeros(2, 2), CMat::zeros(2, 2)).norm() == 0.0);
  const CMat r = CMat::diag({1.0, cplx(0, 1)});
  const CMat g2 = build_gamma(r, CMat::zeros(2, 2));
  CHECK(g2(3, 3) == cplx(0, -1));
  CHECK(g2(1, 1) == cplx(0, 1));
  CHECK(g2(0, 2) == cplx(0));
  CHECK_THROWS_AS(build_gamma(CMat::identity(2), CMat::identity(3)), Error);
}

TEST_CASE("realify examples") {
  auto [rp, sp] = realify(CMat::identity(2), CMat::zeros(2, 2));
  CHECK((rp - MatrixXd::Identity(4, 4)).norm() == 0.0);
  CHECK(sp.norm() == 0.0);
  std::tie(rp, sp) = realify(CMat{{cplx(0, 1)}}, CMat{{0.0}});
  MatrixXd want(2, 2);
  want << 0, -1, 1, 0;
  CHECK((rp - want).norm() == 0.0);
  std::tie(rp, sp) = realify(CMat{{0.0}}, CMat{{1.0}});
  want << 1, 0, 0, -1;
  CHECK((sp - want).norm() == 0.0);
}

TEST_CASE("kappa matrix") {
  const double h = std::numbers::sqrt2 / 2;
  const CMat k1 = kappa_matrix(1);
  CHECK(dist(k1, CMat{{h, cplx(0, h)}, {h, cplx(0, -h)}}) < 1e-16);
  const CMat k2 = kappa_matrix(2);
  const CMat want{{h, cplx(0, h), 0, 0},
                  {0, 0, h, cplx(0, h)},
                  {h, cplx(0, -h), 0, 0},
                  {0, 0, h, cplx(0, -h)}};
  CHECK(dist(k2, want) < 1e-16);
  CHECK(std::abs(k2.det() - 1.0) < 1e-14);
  for (std::size_t n = 1; n <= 4; ++n) {
    const CMat k = kappa_matrix(n);
    CHECK(dist(k * k.adjoint(), CMat::identity(2 * n)) < 1e-14);
  }
}

TEST_CASE("kappa conjugates realified blocks back to complex blocks") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + std::size_t(trial % 3);
    const CMat r = random_cmat(rng, n, n);
    const CMat s = random_symmetric(rng, n);
    const CMat k = kappa_matrix(n);
    const auto [rp, zero] = realify(r, CMat::zeros(n, n));
    CMat want(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        want(i, j) = r(i, j);
        want(n + i, n + j) = std::conj(r(i, j));
      }
    CHECK(dist(k * from_real(rp) * k.adjoint(), want) <= 1e-12);
    const auto [zero2, sp] = realify(CMat::zeros(n, n), s);
    CMat want2(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        want2(i, n + j) = s(i, j);
        want2(n + i, j) = std::conj(s(i, j));
      }
    CHECK(dist(k * from_real(sp) * k.adjoint(), want2) <= 1e-12);
  }
}

TEST_CASE("realified determinant equals the complex block determinant") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = trial < 400 ? 2 : 3;
    const CMat r = random_cmat(rng, n, n);
    const CMat s = random_cmat(rng, n, n);
    const auto [rp, sp] = realify(r, s);
    const double lhs = (rp + sp).determinant();
    CMat blk(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        blk(i, j) = r(i, j);
        blk(i, n + j) = s(i, j);
        blk(n + i, j) = std::conj(s(i, j));
        blk(n + i, n + j) = std::conj(r(i, j));
      }
    const cplx rhs = blk.det();
    CHECK(std::abs(lhs - rhs) <= 1e-9 * (1 + std::abs(rhs)));
  }
}

TEST_CASE("gamma determinant is real") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + std::size_t(trial % 3);
    const cplx d = build_gamma(random_cmat(rng, n, n), random_cmat(rng, n, n)).det();
    CHECK(std::abs(d.imag()) <= 1e-10 * (1 + std::abs(d)));
  }
}

TEST_CASE("gamma determinant scaling law") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + std::size_t(trial % 2);
    const CMat r = random_cmat(rng, n, n);
    const CMat p = random_symmetric(rng, n);
    const CMat a = random_cmat(rng, n, n);
    const cplx c = crsing::testing::random_cplx(rng);
    const cplx d0 = build_gamma(r, p).det();
    const cplx d1 = build_gamma(star_congruence(c, a, r), sym_congruence(std::conj(c), a, p)).det();
    const double factor = std::pow(std::abs(c), 2.0 * double(n)) * std::pow(std::abs(a.det()), 4.0);
    CHECK(std::abs(d1 - factor * d0) <= 1e-8 * std::abs(d1) + 1e-12);
  }
}

TEST_CASE("inverse and determinant helpers") {
  const CMat m{{2, cplx(0, 1)}, {cplx(0, -1), 3}};
  CHECK(std::abs(m.det() - cplx(5)) < 1e-15);
  CHECK(dist(m * m.inverse(), CMat::identity(2)) < 1e-14);
  CHECK_THROWS_AS(CMat({{1, 1}, {1, 1}}).inverse(), Error);
  CHECK_THROWS_AS(CMat(2, 2, 0.0), Error);
}
