#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crsing/locus.hpp"
#include "test_util.hpp"

using namespace crsing;

namespace {

const cplx I(0.0, 1.0);
const double kSqrt3 = std::sqrt(3.0);

// Independent closed form of the CP^2 graph function in the z0 = 1 chart.
cplx cp2_affine(double t, cplx z1, cplx z2) {
  const cplx c1 = std::conj(z1), c2 = std::conj(z2);
  return t * (2.0 * c1 + 2.0 * z1 * c2 - z2 * c1 + 2.0 * z1 * z2) /
         (6.0 + std::norm(z1) + 6.0 * std::norm(z2));
}

cplx eval_series(const PSeries &h, cplx w1, cplx w2) {
  const std::array<cplx, 4> v{w1, w2, std::conj(w1), std::conj(w2)};
  cplx s = 0;
  for (const auto &[k, c] : h.terms()) {
    cplx m = c;
    for (int i = 0; i < 4; ++i) m *= std::pow(v[i], k[i]);
    s += m;
  }
  return s;
}

const Enumeration &cp2_t1() {
  static const Enumeration e = enumerate(cp2_iota(1.0));
  return e;
}

bool has_point(const SearchResult &sr, cplx z1, cplx z2, double tol) {
  for (const auto &p : sr.points)
    if (std::abs(p.z1 - z1) <= tol && std::abs(p.z2 - z2) <= tol) return true;
  return false;
}

Chart flat_chart(PSeries num) {
  Chart ch;
  ch.id = "test";
  ch.num = std::move(num);
  ch.den = PSeries(2, 2);
  ch.lo = {-1, -1, -1, -1};
  ch.hi = {1, 1, 1, 1};
  return ch;
}

} // namespace

TEST_CASE("cp2 affine chart: exactly the five closed-form roots") {
  const ChartedManifold m = cp2_iota(1.0);
  const SearchResult sr = find_cr_points(m.charts[0], 12);
  REQUIRE(!sr.identically_critical);
  REQUIRE(sr.points.size() == 5);
  for (auto [a, b] : std::vector<std::pair<cplx, cplx>>{
           {0.0, 2.0}, {kSqrt3, 1.0}, {-kSqrt3, 1.0}, {3.0 * I, -1.0}, {-3.0 * I, -1.0}})
    CHECK(has_point(sr, a, b, 1e-8));
  for (const auto &p : sr.points) {
    CHECK(p.residual <= 1e-12);
    CHECK(p.snapped);
    CHECK(!p.on_boundary);
  }
}

TEST_CASE("cp2 charts at infinity: the pinned search finds only the origin") {
  const ChartedManifold m = cp2_iota(1.0);
  for (int c : {1, 2}) {
    const SearchResult sr = find_cr_points(m.charts[std::size_t(c)], 12);
    REQUIRE(sr.points.size() == 1);
    CHECK(std::abs(sr.points[0].z1) == 0.0);
    CHECK(std::abs(sr.points[0].z2) <= 1e-12);
  }
}

TEST_CASE("identically critical charts are flagged") {
  SUBCASE("F = 0") {
    const SearchResult sr = find_cr_points(flat_chart(PSeries(2, 3)), 4);
    CHECK(sr.identically_critical);
    CHECK(sr.points.empty());
  }
  SUBCASE("holomorphic F") {
    PSeries num(2, 3);
    num.set({2, 1, 0, 0}, 1.0);
    CHECK(find_cr_points(flat_chart(num), 4).identically_critical);
  }
}

TEST_CASE("search errors") {
  PSeries num(2, 1);
  num.set({0, 0, 1, 0}, 1.0);
  Chart ch = flat_chart(num);
  CHECK_THROWS_AS(find_cr_points(ch, 1), Error);
  // z1 = 0 lies on the 3-point grid over [-1, 1].
  ch.den = PSeries(2, 1);
  ch.den.set({1, 0, 0, 0}, 1.0);
  try {
    find_cr_points(ch, 3);
    FAIL("expected DenominatorVanishes");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::DenominatorVanishes);
  }
}

TEST_CASE("Taylor data at (0,2) matches the published expansion") {
  const Chart ch = cp2_iota(1.0).charts[0];
  const PSeries t = chart_taylor(ch, 0.0, 2.0, 3);
  CHECK(std::abs(t.coeff({0, 0, 0, 0})) <= 1e-15);
  CHECK(std::abs(t.coeff({1, 0, 0, 0}) - 4.0 / 15) <= 1e-10);
  CHECK(std::abs(t.coeff({0, 1, 0, 0})) <= 1e-10);
  CHECK(std::abs(t.coeff({1, 1, 0, 0}) + 1.0 / 25) <= 1e-10);
  CHECK(std::abs(t.coeff({1, 0, 0, 1}) + 1.0 / 25) <= 1e-10);
  CHECK(std::abs(t.coeff({0, 1, 1, 0}) + 1.0 / 30) <= 1e-10);
  const PSeries quad = t.homogeneous(2);
  for (const auto &[k, v] : quad.terms()) {
    const bool listed = k == Exps{1, 1, 0, 0} || k == Exps{1, 0, 0, 1} || k == Exps{0, 1, 1, 0};
    if (!listed) CHECK(std::abs(v) <= 1e-12);
  }

  const PSeries h = local_model(ch, 0.0, 2.0);
  CHECK(h.standard_position());
  CHECK(h.homogeneous(2) == t.homogeneous(2));
  const QuadData q = extract_QRS(h);
  CHECK(q.S.max_abs() <= 1e-12);
  const double det_gamma = build_gamma(q.R, 2.0 * q.S.conj()).det().real();
  CHECK(det_gamma == doctest::Approx(std::norm(q.R.det())).epsilon(1e-10));
  CHECK(det_gamma > 0);
}

TEST_CASE("Taylor data at (sqrt3,1) matches the published expansion") {
  const PSeries t = chart_taylor(cp2_iota(1.0).charts[0], kSqrt3, 1.0, 2);
  const double s = kSqrt3;
  const std::vector<std::pair<Exps, double>> want{
      {{0, 0, 0, 0}, s / 3},        {{1, 0, 0, 0}, 1.0 / 5},     {{0, 1, 0, 0}, -s / 15},
      {{2, 0, 0, 0}, -s / 75},      {{1, 1, 0, 0}, 1.0 / 15},    {{0, 2, 0, 0}, 2 * s / 75},
      {{1, 0, 1, 0}, -8 * s / 225}, {{1, 0, 0, 1}, 4.0 / 75},    {{0, 1, 1, 0}, -4.0 / 75},
      {{0, 1, 0, 1}, -8 * s / 75},
  };
  for (const auto &[k, v] : want) CHECK(std::abs(t.coeff(k) - v) <= 1e-12);
  CHECK(std::abs(t.coeff({2, 0, 0, 0}) - (-s / 75)) <= 1e-12);
  for (const auto &[k, v] : t.terms()) {
    bool listed = false;
    for (const auto &w : want) listed = listed || w.first == k;
    if (!listed) CHECK(std::abs(v) <= 1e-12);
  }
}

TEST_CASE("Taylor jets agree with direct evaluation of the closed form") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double t = 1.7;
  const Chart ch = cp2_iota(t).charts[0];
  for (int trial = 0; trial < 50; ++trial) {
    const cplx p1(u(rng), u(rng)), p2(u(rng), u(rng));
    const PSeries h = chart_taylor(ch, p1, p2, 3);
    const cplx d1 = testing::random_cplx(rng), d2 = testing::random_cplx(rng);
    auto err = [&](double eps) {
      return std::abs(cp2_affine(t, p1 + eps * d1, p2 + eps * d2) - eval_series(h, eps * d1, eps * d2));
    };
    // Truncation at degree 3 leaves an O(eps^4) defect.
    const double e1 = err(1e-2), e2 = err(5e-3);
    CHECK(e1 <= 1e-5);
    if (e1 > 1e-13) CHECK(e1 / e2 > 12.0);
    CHECK(std::abs(chart_eval(ch, p1, p2) - cp2_affine(t, p1, p2)) <= 1e-13);
  }
}

TEST_CASE("Wirtinger derivatives agree with finite differences") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const std::vector<ChartedManifold> ms{cp2_iota(0.7), s4_ellipsoid({1, 2, 3, 4, 5}), s2xs2({1, 2, 1, 3, 5, 1})};
  for (const auto &m : ms)
    for (const auto &ch : m.charts)
      for (int trial = 0; trial < 10; ++trial) {
        const cplx z1(u(rng), u(rng)), z2(u(rng), u(rng));
        if (!chart_valid(ch, z1, z2)) continue;
        const PSeries t = chart_taylor(ch, z1, z2, 1);
        const double h = 1e-6;
        for (int k = 0; k < 2; ++k) {
          const cplx e1 = k == 0 ? 1.0 : 0.0, e2 = k == 1 ? 1.0 : 0.0;
          auto f = [&](cplx d) { return chart_eval(ch, z1 + d * e1, z2 + d * e2); };
          const cplx fx = (f(h) - f(-h)) / (2 * h), fy = (f(h * I) - f(-h * I)) / (2 * h);
          const cplx dzbar = 0.5 * (fx + I * fy), dz = 0.5 * (fx - I * fy);
          CHECK(std::abs(t.coeff(k == 0 ? Exps{0, 0, 1, 0} : Exps{0, 0, 0, 1}) - dzbar) <= 1e-7);
          CHECK(std::abs(t.coeff(k == 0 ? Exps{1, 0, 0, 0} : Exps{0, 1, 0, 0}) - dz) <= 1e-7);
        }
      }
}

TEST_CASE("local models of the ellipsoid examples") {
  SUBCASE("round S4 north point") {
    const ChartedManifold m = s4_ellipsoid({1, 1, 1, 1, 1});
    const PSeries h = local_model(m.charts[0], 0.0, 0.0);
    const PSeries q = h.homogeneous(2);
    CHECK(q.terms().size() == 2);
    CHECK(std::abs(q.coeff({1, 0, 1, 0}) + 0.5) <= 1e-15);
    CHECK(std::abs(q.coeff({0, 1, 0, 1}) + 0.5) <= 1e-15);
    // Odd terms of an even function vanish.
    CHECK(h.homogeneous(3).max_abs() <= 1e-15);
  }
  SUBCASE("S2xS2 R matrices for every branch") {
    const std::array<double, 6> p{1, 2, 1, 3, 5, 1};
    const std::array<double, 6> p2{0.5, 3, 2, 1.5, 0.7, 4};
    for (const auto &par : {p, p2}) {
      const ChartedManifold m = s2xs2(par);
      const double a = par[0], b = par[1], c = par[2], d = par[3], e = par[4], f = par[5];
      int idx = 0;
      for (int e1 : {1, -1})
        for (int e2 : {1, -1}) {
          const QuadData q = extract_QRS(local_model(m.charts[std::size_t(idx++)], 0.0, 0.0));
          CHECK(std::abs(q.R(0, 0) - e1 * (a + b) / (4 * std::sqrt(c))) <= 1e-14);
          CHECK(std::abs(q.R(1, 1) - I * double(e2) * (d + e) / (4 * std::sqrt(f))) <= 1e-14);
          CHECK(std::abs(q.R(0, 1)) + std::abs(q.R(1, 0)) == 0.0);
          CHECK(std::abs(q.S(0, 0) - e1 * (a - b) / (8 * std::sqrt(c))) <= 1e-14);
          CHECK(std::abs(q.S(1, 1) - I * double(e2) * (d - e) / (8 * std::sqrt(f))) <= 1e-14);
        }
    }
  }
}

TEST_CASE("local_model rejects non-critical points") {
  const Chart ch = cp2_iota(1.0).charts[0];
  CHECK_THROWS_AS(local_model(ch, 0.5, 0.5), Error);
  try {
    local_model(ch, 0.0, 2.0 + 1e-6);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::ResidualTooLarge);
  }
}

TEST_CASE("point_index examples") {
  PSeries h(2, 3);
  h.set({1, 0, 1, 0}, 1.0);
  h.set({0, 1, 0, 1}, 1.0);
  CHECK(point_index(h, Orientation::Plus) == PointIndex::Plus);

  auto bishop = [](double g) {
    PSeries b(1, 2);
    b.set({1, 1}, 1.0);
    b.set({2, 0}, g);
    b.set({0, 2}, g);
    return b;
  };
  CHECK(point_index(bishop(0.25), Orientation::Plus) == PointIndex::Plus);
  CHECK(point_index(bishop(0.5), Orientation::Plus) == PointIndex::Degenerate);
  CHECK(point_index(bishop(0.6), Orientation::Plus) == PointIndex::Minus);

  PSeries zero(2, 3);
  CHECK(point_index(zero, Orientation::Plus) == PointIndex::Degenerate);
}

TEST_CASE("conjugating a base coordinate can change the index") {
  // h = z1 conj z2 + z2 conj z1 has R = [[0,1],[1,0]]; swapping z1 and
  // conj z1 turns it into conj z1 conj z2 + z1 z2, which is pure S and Q.
  PSeries h(2, 3);
  h.set({0, 1, 1, 0}, 1.0);
  h.set({1, 0, 0, 1}, 1.0);
  const PSeries g = conjugate_first(h);
  CHECK(g.coeff({0, 0, 1, 1}) == 1.0);
  CHECK(g.coeff({1, 1, 0, 0}) == 1.0);
  CHECK(conjugate_first(g) == h);
  CHECK(point_index(h, Orientation::Plus) == PointIndex::Plus);
  // R = 0, S = [[0,1/2],[1/2,0]]: Gamma = [[0, Pbar],[P, 0]], det = |det P|^2 > 0.
  CHECK(point_index(h, Orientation::Minus) == PointIndex::Plus);
  // Bishop-type second block with gamma = 0.8 > 1/2.
  PSeries k(2, 3);
  k.set({1, 0, 1, 0}, 1.0);
  k.set({0, 0, 0, 2}, 0.8);
  k.set({0, 2, 0, 0}, 0.8);
  k.set({0, 1, 0, 1}, 1.0);
  CHECK(point_index(k, Orientation::Plus) == PointIndex::Minus);
}

TEST_CASE("enumerate: CP2 family at t = 1") {
  const Enumeration &e = cp2_t1();
  REQUIRE(e.points.size() == 7);
  CHECK(e.I_plus == 7);
  CHECK(e.I_minus == 0);
  CHECK(e.general_position);
  CHECK(e.warnings.empty());
  int infinity = 0;
  for (const auto &p : e.points) {
    CHECK(p.orientation == Orientation::Plus);
    CHECK(p.index == PointIndex::Plus);
    CHECK(p.residual <= 1e-10);
    if (p.chart != "z0=1") ++infinity;
  }
  CHECK(infinity == 2);
  const TopologyReport tr = topology_check(cp2_iota(1.0), e.I_plus, e.I_minus);
  CHECK(tr.pass);
  CHECK(tr.expected_sum == 7);
  CHECK(tr.expected_diff == 7);
}

TEST_CASE("enumerate: S4 and S2xS2") {
  const Enumeration s4 = enumerate(s4_ellipsoid({1, 1, 1, 1, 1}));
  REQUIRE(s4.points.size() == 2);
  CHECK(s4.I_plus == 1);
  CHECK(s4.I_minus == 1);
  CHECK(s4.points[0].orientation != s4.points[1].orientation);

  const Enumeration s22 = enumerate(s2xs2({1, 2, 1, 3, 5, 1}));
  REQUIRE(s22.points.size() == 4);
  CHECK(s22.I_plus == 2);
  CHECK(s22.I_minus == 2);
  for (const auto &p : s22.points) CHECK(p.index == PointIndex::Plus);
}

TEST_CASE("S4 normal forms: N = I and P diagonal in [0,1)") {
  for (const auto &d : std::vector<std::array<double, 5>>{{1, 1, 1, 1, 1}, {1, 2, 3, 4, 5}, {2, 0.5, 0.3, 0.3, 7}}) {
    const Enumeration e = enumerate(s4_ellipsoid(d));
    REQUIRE(e.points.size() == 2);
    // Hand-derived: the x1,y1 block gives |d1-d2|/(d1+d2), the x2,y2 block
    // |d3-d4|/(d3+d4); the canonical form lists them in ascending order.
    double g1 = std::abs(d[0] - d[1]) / (d[0] + d[1]), g2 = std::abs(d[2] - d[3]) / (d[2] + d[3]);
    if (g1 > g2) std::swap(g1, g2);
    for (const auto &p : e.points) {
      CHECK(dist(p.row.N, CMat::identity(2)) <= 1e-9);
      CHECK(std::abs(p.row.P(0, 1)) + std::abs(p.row.P(1, 0)) <= 1e-9);
      CHECK(std::abs(p.row.P(0, 0) - g1) <= 1e-9);
      CHECK(std::abs(p.row.P(1, 1) - g2) <= 1e-9);
      CHECK(p.row.P(1, 1).real() < 1.0);
    }
  }
}

TEST_CASE("S2xS2 canonical P entries and independence of c, f") {
  for (const auto &par : std::vector<std::array<double, 6>>{{1, 2, 1, 3, 5, 1}, {1, 2, 9, 3, 5, 0.2}}) {
    const Enumeration e = enumerate(s2xs2(par));
    REQUIRE(e.points.size() == 4);
    const double ga = std::abs(par[0] - par[1]) / (par[0] + par[1]);
    const double gd = std::abs(par[3] - par[4]) / (par[3] + par[4]);
    for (const auto &p : e.points) {
      const bool same = p.chart == "eta=(+,+)" || p.chart == "eta=(-,-)";
      CHECK(std::abs(p.row.P(0, 0) - (same ? ga : gd)) <= 1e-9);
      CHECK(std::abs(p.row.P(1, 1) - (same ? gd : ga)) <= 1e-9);
    }
  }
  // Arithmetic of the example parameters (1,2,1,3,5,1).
  CHECK(std::abs(1.0 / 3 - std::abs(1.0 - 2.0) / 3.0) == 0.0);
  CHECK(std::abs(0.25 - std::abs(3.0 - 5.0) / 8.0) == 0.0);
}

TEST_CASE("symmetric ellipsoids give P = 0") {
  const Enumeration z = enumerate(s2xs2({2, 2, 1, 3, 3, 1}), {6});
  REQUIRE(z.points.size() == 4);
  for (const auto &p : z.points) CHECK(p.row.P.max_abs() <= 1e-12);
}

TEST_CASE("index equals the Hessian sign at every found point") {
  std::vector<Enumeration> es{cp2_t1(), enumerate(s4_ellipsoid({1, 2, 3, 4, 5}), {8}),
                              enumerate(s2xs2({0.5, 3, 2, 1.5, 0.7, 4}), {8})};
  for (const auto &e : es)
    for (const auto &p : e.points) {
      const PSeries m = p.orientation == Orientation::Minus ? conjugate_first(p.model) : p.model;
      const HessianIndex hi = hessian_index(m);
      const int hs = hi.sign == Sign::Plus ? 1 : hi.sign == Sign::Minus ? -1 : 0;
      CHECK(hs == index_value(p.index));
    }
}

TEST_CASE("CP2 point set does not depend on t") {
  const Enumeration &ref = cp2_t1();
  for (double t : {0.5, 2.0, -1.5}) {
    const Enumeration e = enumerate(cp2_iota(t));
    REQUIRE(e.points.size() == ref.points.size());
    for (std::size_t i = 0; i < e.points.size(); ++i) {
      CHECK(e.points[i].chart == ref.points[i].chart);
      CHECK(std::abs(e.points[i].z1 - ref.points[i].z1) <= 1e-8);
      CHECK(std::abs(e.points[i].z2 - ref.points[i].z2) <= 1e-8);
      CHECK(e.points[i].index == ref.points[i].index);
    }
  }
}

TEST_CASE("overlapping charts dedupe to one point with one index") {
  ChartedManifold m = cp2_iota(1.0);
  // The full z1 = 1 chart (no pin) sees every affine root with z1 != 0.
  Chart wide = m.charts[1];
  wide.id = "z1=1 wide";
  wide.pin_z1.reset();
  wide.lo = {-1, -1, -1, -1};
  wide.hi = {1, 1, 1, 1};
  wide.exact_points.clear();
  const SearchResult sr = find_cr_points(wide, 12);
  REQUIRE(sr.points.size() == 5);
  const double r = 1.0 / kSqrt3;
  CHECK(has_point(sr, r, r, 1e-10));
  CHECK(has_point(sr, -r, -r, 1e-10));
  CHECK(has_point(sr, -I / 3.0, I / 3.0, 1e-10));
  CHECK(has_point(sr, I / 3.0, -I / 3.0, 1e-10));
  CHECK(has_point(sr, 0.0, 0.0, 1e-12));

  m.charts.push_back(wide);
  const Enumeration e = enumerate(m);
  CHECK(e.points.size() == 7);
  CHECK(e.warnings.empty());
  CHECK(e.I_plus == 7);
}

TEST_CASE("ambient identification is an equivalence on samples") {
  std::mt19937_64 rng(47);
  const ChartedManifold proj = cp2_iota(1.0), aff = s4_ellipsoid({1, 1, 1, 1, 1});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cplx> a(4), b(4);
    for (auto &x : a) x = testing::random_cplx(rng);
    for (auto &x : b) x = testing::random_cplx(rng);
    const cplx lambda = testing::random_cplx(rng);
    std::vector<cplx> la(a);
    for (auto &x : la) x *= lambda;
    CHECK(ambient_distance(proj, a, a) <= 1e-7);
    CHECK(ambient_distance(proj, a, la) <= 1e-7);
    CHECK(ambient_distance(proj, a, b) == doctest::Approx(ambient_distance(proj, b, a)).epsilon(1e-12));
    CHECK(ambient_distance(aff, a, a) == 0.0);
    CHECK(ambient_distance(aff, a, b) == ambient_distance(aff, b, a));
  }
}

TEST_CASE("topology_check") {
  const ChartedManifold s4 = s4_ellipsoid({1, 1, 1, 1, 1});
  CHECK(topology_check(s4, 1, 1).pass);
  const TopologyReport bad = topology_check(s4, 2, 1);
  CHECK(!bad.pass);
  CHECK(bad.mismatches.size() == 2);
  CHECK(topology_check(s2xs2({1, 2, 1, 3, 5, 1}), 2, 2).pass);

  // The switched convention negates I- and exchanges the two identities.
  const ChartedManifold cp2 = cp2_iota(1.0);
  CHECK(topology_check(cp2, 7, 0, Convention::Switched).pass);
  const TopologyReport sw = topology_check(s4, 1, -1, Convention::Switched);
  CHECK(sw.pass);
  CHECK(sw.expected_sum == 0);
  CHECK(sw.expected_diff == 2);
  const Enumeration e = enumerate(s4, {6, Convention::Switched});
  CHECK(e.I_minus == -1);
  CHECK(topology_check(s4, e.I_plus, e.I_minus, Convention::Switched).pass);

  ChartedManifold none;
  CHECK_THROWS_AS(topology_check(none, 0, 0), Error);
}

TEST_CASE("builtin parameter validation") {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::Singular;
  };
  CHECK(code([] { cp2_iota(0.0); }) == ErrorCode::BadParams);
  CHECK(code([] { s4_ellipsoid({1, 1, -1, 1, 1}); }) == ErrorCode::BadParams);
  CHECK(code([] { s2xs2({1, 1, 1, 1, 0, 1}); }) == ErrorCode::BadParams);
  CHECK(code([] { builtin("s4", {1, 1}); }) == ErrorCode::BadParams);
  CHECK(code([] { builtin("torus", {}); }) == ErrorCode::BadParams);
  CHECK(builtin("cp2", {2.0}).charts.size() == 3);
  CHECK(builtin("s2xs2", {1, 2, 1, 3, 5, 1}).charts.size() == 4);
  CHECK(builtin("s4_ellipsoid", {1, 1, 1, 1, 1}).expected_topology->chi == 2);
}
