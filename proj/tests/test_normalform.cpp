#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crsing/normalform.hpp"
#include "crsing/golden_rows.hpp"
#include "test_util.hpp"

using namespace crsing;
using crsing::testing::random_cmat;
using crsing::testing::random_group_element;
using crsing::testing::random_symmetric;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

const Modulus *find_modulus(const TableRow &row, const std::string &name) {
  for (const auto &m : row.moduli)
    if (m.name == name) return &m;
  return nullptr;
}

// (R, S) acted on by (c, A): (c conj(A)^T R A, c conj(A)^T S conj(A)).
std::pair<CMat, CMat> act(cplx c, const CMat &a, const CMat &r, const CMat &s) {
  return {star_congruence(c, a, r), c * (a.adjoint() * s * a.conj())};
}

CMat s_from_p(const CMat &p) { return cplx(0.5) * p.conj(); }

} // namespace

TEST_CASE("classify_R examples") {
  auto rc = classify_R(CMat::diag({1.0, std::polar(1.0, kPi / 3)}));
  CHECK(rc.rcase.kind == RKind::Theta);
  CHECK(rc.rcase.param == doctest::Approx(kPi / 3).epsilon(1e-12));
  CHECK(std::abs(rc.witness.c - 1.0) < 1e-12);
  CHECK(dist(rc.witness.A, CMat::identity(2)) < 1e-12);

  rc = classify_R(CMat{{0, 1}, {0, 0}});
  CHECK(rc.rcase.kind == RKind::Tau);
  CHECK(rc.rcase.param == 0.0);
  CHECK(dist(rc.N, CMat{{0, 1}, {0, 0}}) < 1e-15);

  rc = classify_R(CMat{{0, 2}, {2, cplx(0, 2)}});
  CHECK(rc.rcase.kind == RKind::Cusp);
  CHECK(dist(rc.N, CMat{{0, 1}, {1, I}}) < 1e-15);
  CHECK(std::abs(rc.witness.c - 0.5) < 1e-12);
  CHECK(dist(rc.witness.A, CMat::identity(2)) < 1e-12);

  rc = classify_R(CMat{{1, 0}, {0, 0}});
  CHECK(rc.rcase.kind == RKind::RankOneHermitian);
  CHECK(rc.witness.residual < 1e-14);

  rc = classify_R(CMat{{0, 1}, {0.5, 0}});
  CHECK(rc.rcase.kind == RKind::Tau);
  CHECK(rc.rcase.param == doctest::Approx(0.5).epsilon(1e-12));

  rc = classify_R(CMat::zeros(2, 2));
  CHECK(rc.rcase.kind == RKind::Zero);
}

TEST_CASE("classify_R theta is symmetric under swapping phases") {
  // diag(1, e^{-i theta}) is the same class as diag(1, e^{i theta}).
  auto rc = classify_R(CMat::diag({1.0, std::polar(1.0, -1.1)}));
  CHECK(rc.rcase.kind == RKind::Theta);
  CHECK(rc.rcase.param == doctest::Approx(1.1).epsilon(1e-12));
  // e^{i pi/3} diag(1, e^{i 2 pi / 3}) has phase difference 2 pi/3.
  rc = classify_R(CMat::diag({std::polar(2.0, kPi / 3), std::polar(0.5, kPi)}));
  CHECK(rc.rcase.param == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("flat R classes") {
  auto rc = classify_R(CMat::identity(2));
  CHECK(rc.rcase.kind == RKind::Theta);
  CHECK(rc.rcase.param == 0.0);
  rc = classify_R(CMat::diag({-2.0, -3.0}));
  CHECK(rc.rcase.param == 0.0);
  rc = classify_R(cplx(0, 1) * CMat::diag({2.0, -3.0}));
  CHECK(rc.rcase.param == kPi);
  CHECK(dist(rc.N, CMat::diag({1.0, -1.0})) < 1e-15);
  rc = classify_R(CMat{{0, 1}, {1, 0}});
  CHECK(rc.rcase.param == kPi);
}

TEST_CASE("normalize_P examples") {
  auto pn = normalize_P({RKind::Theta, 0.0}, CMat::identity(2), CMat{{0, 1}, {1, 0}});
  CHECK(dist(pn.P, CMat::identity(2)) < 1e-12);

  pn = normalize_P({RKind::Theta, kPi}, CMat::diag({1.0, -1.0}), CMat{{0.5, 0.3}, {0.3, 0.5}});
  CHECK(dist(pn.P, CMat::diag({0.4, 0.4})) < 1e-12);
  CHECK(pn.shape == "[[a,0],[0,d]]");

  pn = normalize_P({RKind::Theta, kPi / 2}, CMat::diag({1.0, I}), CMat::diag({-2.0, 3.0 * I}));
  CHECK(dist(pn.P, CMat::diag({2.0, 3.0})) < 1e-12);
  CHECK(pn.shape == "[[a,b],[b,d]]");
  CHECK(std::abs(pn.moduli[2].value) < 1e-15);

  pn = normalize_P({RKind::Zero, 0.0}, CMat::zeros(2, 2), CMat{{1, 2}, {2, 4}});
  CHECK(dist(pn.P, CMat::diag({1.0, 0.0})) < 1e-12);
}

TEST_CASE("normalize_P witness stabilizes N") {
  std::mt19937_64 rng(17);
  const std::vector<std::pair<RCase, CMat>> cases = {
      {{RKind::Theta, 1.0}, CMat::diag({1.0, std::polar(1.0, 1.0)})},
      {{RKind::Theta, 0.0}, CMat::identity(2)},
      {{RKind::Theta, kPi}, CMat::diag({1.0, -1.0})},
      {{RKind::Tau, 0.3}, CMat{{0, 1}, {0.3, 0}}},
      {{RKind::Tau, 0.0}, CMat{{0, 1}, {0, 0}}},
      {{RKind::Cusp, 0.0}, CMat{{0, 1}, {1, I}}},
      {{RKind::RankOneHermitian, 0.0}, CMat::diag({1.0, 0.0})},
      {{RKind::Zero, 0.0}, CMat::zeros(2, 2)},
  };
  for (const auto &[rc, n] : cases) {
    for (int trial = 0; trial < 100; ++trial) {
      const CMat p = random_symmetric(rng, 2);
      const PNormal pn = normalize_P(rc, n, p);
      const CMat &a = pn.witness.A;
      CHECK(dist(star_congruence(pn.witness.c, a, n), pn.N) <= 1e-8 * (1 + p.norm()));
      CHECK(dist(sym_congruence(std::conj(pn.witness.c), a, p), pn.P) <= 1e-8 * (1 + p.norm()));
    }
  }
}

TEST_CASE("classify_pair examples") {
  auto row = classify_pair(CMat::diag({1.0, I}), CMat::zeros(2, 2));
  CHECK(dist(row.N, CMat::diag({1.0, I})) < 1e-12);
  CHECK(row.P.norm() < 1e-12);
  CHECK(row.det_sign == DetSign::Plus);

  row = classify_pair(CMat::identity(2), CMat::diag({0.1, 0.2}));
  CHECK(dist(row.N, CMat::identity(2)) < 1e-12);
  CHECK(dist(row.P, CMat::diag({0.2, 0.4})) < 1e-12);
  CHECK(row.det_sign == DetSign::Plus);
  REQUIRE(row.sigma_Gamma.has_value());
  CHECK(*row.sigma_Gamma == 4);

  row = classify_pair(CMat::zeros(2, 2), CMat::zeros(2, 2));
  CHECK(row.r_case.kind == RKind::Zero);
  CHECK(row.rho_N == 0);
  CHECK(row.rho_P == 0);
  CHECK(row.rho_NP == 0);
  CHECK(row.rho_Gamma == 0);
  CHECK(row.det_sign == DetSign::Zero);
}

TEST_CASE("is_quadratically_flat examples") {
  auto phi = is_quadratically_flat(CMat::diag({1.0, -1.0}));
  REQUIRE(phi.has_value());
  CHECK(*phi == 0.0);
  phi = is_quadratically_flat(I * CMat{{2, cplx(1, -1)}, {cplx(1, 1), 0}});
  REQUIRE(phi.has_value());
  CHECK(*phi == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(!is_quadratically_flat(CMat::diag({1.0, std::polar(1.0, kPi / 3)})).has_value());
  phi = is_quadratically_flat(CMat::zeros(2, 2));
  REQUIRE(phi.has_value());
  CHECK(*phi == 0.0);
}

TEST_CASE("flat_invariants examples") {
  auto fi = flat_invariants(CMat::identity(2), CMat::zeros(2, 2));
  CHECK(fi.rho_Gamma == 4);
  CHECK(fi.sigma_Gamma == 4);
  fi = flat_invariants(CMat::diag({1.0, -1.0}), CMat::identity(2));
  CHECK(fi.rho_Gamma == 2);
  CHECK(fi.sigma_Gamma == 0);
  fi = flat_invariants(CMat::diag({1.0, 0.0}), CMat::diag({1.0, 0.0}));
  CHECK(fi.rho_Gamma == 1);
  CHECK(fi.sigma_Gamma == 1);
  CHECK_THROWS_AS(flat_invariants(CMat{{0, 1}, {0, 0}}, CMat::zeros(2, 2)), Error);
}

TEST_CASE("complexification classes") {
  CHECK(complexification_class(CMat::zeros(2, 2), CMat::identity(2)) == Quadric::W1sqW2sq);
  CHECK(complexification_class(CMat::identity(2), CMat::zeros(2, 2)) == Quadric::Z1W1Z2W2);
  CHECK(complexification_class(CMat::zeros(2, 2), CMat::zeros(2, 2)) == Quadric::Zero);
  CHECK(complexification_class(CMat::diag({0.0, 1.0}), CMat::diag({1.0, 0.0})) == Quadric::Z2W2W1sq);
  CHECK(complexification_class(CMat::zeros(2, 2), CMat::diag({1.0, 0.0})) == Quadric::W1sq);
  CHECK(complexification_class(CMat::diag({1.0, 0.0}), CMat::diag({1.0, 0.0})) == Quadric::W1sq);
  CHECK(complexification_class(CMat::diag({1.0, 0.0}), CMat::zeros(2, 2)) == Quadric::Z1W1);
}

TEST_CASE("hermitian pair examples") {
  auto hp = hermitian_pair_normalize(CMat::diag({1.0, -1.0}), CMat::zeros(2, 2));
  CHECK(hp.kind == HermPairForm::Kind::DiagDiag);
  CHECK(hp.k1 == 0.0);
  CHECK(hp.k2 == 0.0);
  hp = hermitian_pair_normalize(CMat::diag({1.0, -1.0}), CMat::diag({3.0, -2.0}));
  CHECK(hp.kind == HermPairForm::Kind::DiagDiag);
  CHECK(hp.k1 == doctest::Approx(3.0));
  CHECK(hp.k2 == doctest::Approx(-2.0));
  hp = hermitian_pair_normalize(CMat{{0, 1}, {1, 0}}, CMat{{0, I}, {-I, 0}});
  CHECK(hp.kind == HermPairForm::Kind::OffXY);
  CHECK(std::abs(hp.x) < 1e-14);
  CHECK(hp.y == doctest::Approx(1.0));
  hp = hermitian_pair_normalize(CMat{{0, 1}, {1, 0}}, CMat{{0, 2}, {2, -1}});
  CHECK(hp.kind == HermPairForm::Kind::OffK);
  CHECK(hp.k == doctest::Approx(2.0));
  CHECK(hp.eps == -1);
  CHECK_THROWS_AS(hermitian_pair_normalize(CMat::identity(2), CMat::zeros(2, 2)), Error);
}

TEST_CASE("golden rows reproduce invariant columns") {
  for (const auto &g : crsing::fixtures::golden_rows()) {
    CAPTURE(g.label);
    const TableRow row = classify_pair(g.N, s_from_p(g.P));
    CHECK(row.shape == g.shape);
    CHECK(dist(row.N, g.N) < 1e-9);
    CHECK(dist(row.P, g.P) < 1e-9);
    if (g.rho_P >= 0) {
      CHECK(row.rho_P == g.rho_P);
      CHECK(row.rho_NP == g.rho_NP);
      CHECK(row.rho_Gamma == g.rho_Gamma);
      if (g.sigma_Gamma >= 0) {
        REQUIRE(row.sigma_Gamma.has_value());
        CHECK(*row.sigma_Gamma == g.sigma_Gamma);
      }
    }
    if (g.moduli_dof >= 0) {
      int dof = 0;
      for (const auto &m : row.moduli) dof += m.dof;
      CHECK(dof == g.moduli_dof);
    }
    CHECK(g.signs.find(det_sign_char(row.det_sign)) != std::string::npos);
  }
}

TEST_CASE("idempotence on canonical pairs") {
  for (const auto &g : crsing::fixtures::golden_rows()) {
    CAPTURE(g.label);
    const TableRow row = classify_pair(g.N, s_from_p(g.P));
    CHECK(row.witness.residual <= 1e-10);
    const TableRow again = classify_pair(row.N, s_from_p(row.P));
    CHECK(dist(again.N, row.N) < 1e-10);
    CHECK(dist(again.P, row.P) < 1e-10);
  }
}

TEST_CASE("orbit consistency on random pairs") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 300; ++trial) {
    const CMat r = random_cmat(rng, 2, 2);
    const CMat s = random_symmetric(rng, 2);
    const auto [c, a] = random_group_element(rng);
    const auto [r2, s2] = act(c, a, r, s);
    const TableRow x = classify_pair(r, s), y = classify_pair(r2, s2);
    CAPTURE(trial);
    CHECK(x.r_case.kind == y.r_case.kind);
    CHECK(std::abs(x.r_case.param - y.r_case.param) <= 1e-6);
    CHECK(x.shape == y.shape);
    REQUIRE(x.moduli.size() == y.moduli.size());
    for (std::size_t k = 0; k < x.moduli.size(); ++k)
      CHECK(std::abs(x.moduli[k].value - y.moduli[k].value) <=
            1e-6 * std::max(1.0, std::abs(x.moduli[k].value)));
    CHECK(x.rho_P == y.rho_P);
    CHECK(x.rho_NP == y.rho_NP);
    CHECK(x.rho_Gamma == y.rho_Gamma);
    CHECK(x.det_sign == y.det_sign);
    CHECK(x.witness.residual <= 1e-8 * (1 + r.norm() + 2 * s.norm()));
    CHECK(y.witness.residual <= 1e-8 * (1 + r2.norm() + 2 * s2.norm()));
  }
}

TEST_CASE("orbit consistency on every table row") {
  std::mt19937_64 rng(8080);
  for (const auto &g : crsing::fixtures::golden_rows()) {
    CAPTURE(g.label);
    const TableRow base = classify_pair(g.N, s_from_p(g.P));
    for (int trial = 0; trial < 20; ++trial) {
      const auto [c, a] = random_group_element(rng);
      const auto [r2, s2] = act(c, a, g.N, s_from_p(g.P));
      const TableRow y = classify_pair(r2, s2);
      CHECK(y.r_case.kind == base.r_case.kind);
      CHECK(std::abs(y.r_case.param - base.r_case.param) <= 1e-6);
      CHECK(y.shape == base.shape);
      CHECK(dist(y.N, base.N) <= 1e-6);
      CHECK(dist(y.P, base.P) <= 1e-6);
      CHECK(y.rho_P == base.rho_P);
      CHECK(y.rho_NP == base.rho_NP);
      CHECK(y.rho_Gamma == base.rho_Gamma);
      CHECK(y.sigma_Gamma == base.sigma_Gamma);
      CHECK(y.det_sign == base.det_sign);
    }
  }
}

TEST_CASE("cusp moduli beyond the printed shapes are invariant") {
  // A cusp pair with b != 0 relative to a keeps b after normalization.
  std::mt19937_64 rng(31);
  const CMat n{{0, 1}, {1, I}};
  const CMat p{{1.0, 0.5}, {0.5, cplx(0.2, 0.7)}};
  const TableRow base = classify_pair(n, s_from_p(p));
  CHECK(base.shape == "[[a,b],[b,d]]");
  const Modulus *b = find_modulus(base, "b");
  REQUIRE(b != nullptr);
  CHECK(std::abs(b->value - 0.5) < 1e-12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [c, a] = random_group_element(rng);
    const auto [r2, s2] = act(c, a, n, s_from_p(p));
    const TableRow y = classify_pair(r2, s2);
    CHECK(dist(y.P, base.P) <= 1e-6);
  }
}
