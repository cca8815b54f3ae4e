#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crsing/json_io.hpp"
#include "test_util.hpp"

using namespace crsing;
using crsing::testing::random_cmat;

namespace {

bool raises_parse_error(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code() == ErrorCode::ParseError;
  }
  return false;
}

} // namespace

TEST_CASE("complex numbers round trip and accept bare reals") {
  const cplx z(1.25, -3.5);
  CHECK(cplx_from_json(to_json(z)) == z);
  CHECK(cplx_from_json(Json(2.0)) == cplx(2.0, 0.0));
  CHECK(cplx_from_json(Json{{"re", 0.5}}) == cplx(0.5, 0.0));
  CHECK(to_json(cplx(-0.0, -0.0)).dump() == R"({"im":0.0,"re":0.0})");
}

TEST_CASE("matrices round trip exactly") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat m = random_cmat(rng, 2 + std::size_t(trial % 2), 2);
    const CMat back = cmat_from_json(parse_json(to_json(m).dump()));
    REQUIRE(back.rows() == m.rows());
    CHECK(back.entries() == m.entries());
  }
  const CMat real = cmat_from_json(parse_json(R"({"rows":1,"cols":2,"re":[1,2]})"));
  CHECK(real(0, 1) == cplx(2.0, 0.0));
}

TEST_CASE("series round trip") {
  PSeries h(2, 3);
  h.set({1, 0}, {1, 0}, 1.0);
  h.set({0, 1}, {0, 1}, cplx(0.5, 0.25));
  h.set({2, 1}, {0, 0}, cplx(-1.0, 2.0));
  CHECK(pseries_from_json(parse_json(to_json(h).dump())) == h);
}

TEST_CASE("malformed input raises ParseError") {
  CHECK(raises_parse_error([] { parse_json("{\"rows\": 2,"); }));
  CHECK(raises_parse_error([] { cmat_from_json(parse_json(R"({"rows":2,"cols":2,"re":[1,2,3]})")); }));
  CHECK(raises_parse_error([] { cmat_from_json(parse_json(R"({"rows":"two","cols":2,"re":[]})")); }));
  CHECK(raises_parse_error([] { pseries_from_json(parse_json(R"({"nvars":2,"trunc":2,"terms":[{"alpha":[3,0],"beta":[0,0],"re":1}]})")); }));
  CHECK(raises_parse_error([] { pseries_from_json(parse_json(R"({"nvars":2,"trunc":3,"terms":[{"alpha":[1],"beta":[0,0],"re":1}]})")); }));
  CHECK(raises_parse_error([] { manifold_from_json(parse_json(R"({"charts":[]})")); }));
  CHECK(raises_parse_error([] { cplx_from_json(parse_json(R"("x")")); }));
}

TEST_CASE("format_cplx") {
  CHECK(format_cplx({1.0, 0.0}) == "1+0i");
  CHECK(format_cplx({-0.5, -2.0}) == "-0.5-2i");
  CHECK(format_cplx({-0.0, -0.0}) == "0+0i");
  CHECK(format_cplx({1.0 / 3, 0.0}) == "0.333333333333+0i");
}

TEST_CASE("table rows serialize every column") {
  const TableRow row = classify_pair(CMat::identity(2), CMat::diag({0.1, 0.2}));
  const Json j = to_json(row);
  CHECK(j.at("shape") == "[[a,0],[0,d]]");
  CHECK(j.at("rho_P") == 2);
  CHECK(j.at("rho_NP") == 2);
  CHECK(j.at("rho_Gamma") == 4);
  CHECK(j.at("sigma_Gamma") == 4);
  CHECK(j.at("det_sign") == "+");
  CHECK(j.at("r_case").at("kind").is_string());
  CHECK(j.at("witness").at("residual").get<double>() < 1e-10);
  CHECK(to_json(row).dump() == j.dump());
}

TEST_CASE("a manifest reproduces the built-in sphere") {
  // The south chart of the round sphere: F = -sqrt(1 - |z|^2), one point at 0.
  const char *text = R"({
    "name": "round S4 south",
    "topology": {"target": "C3", "chi": 2, "p1": 0},
    "charts": [{
      "id": "south",
      "num": {"nvars": 2, "trunc": 0, "terms": []},
      "roots": [{"coef": -1, "radicand": {"nvars": 2, "trunc": 2, "terms": [
        {"alpha": [0,0], "beta": [0,0], "re": 1},
        {"alpha": [1,0], "beta": [1,0], "re": -1},
        {"alpha": [0,1], "beta": [0,1], "re": -1}]}}],
      "box": {"lo": [-1,-1,-1,-1], "hi": [1,1,1,1]},
      "orientation": -1
    }]})";
  const ChartedManifold m = manifold_from_json(parse_json(text));
  REQUIRE(m.charts.size() == 1);
  CHECK(m.charts[0].den.terms().empty());
  CHECK(m.charts[0].orientation == -1);
  REQUIRE(m.expected_topology);
  CHECK(m.expected_topology->chi == 2);
  const Enumeration e = enumerate(m, {8, Convention::Lai});
  REQUIRE(e.points.size() == 1);
  CHECK(std::abs(e.points[0].z1) < 1e-10);
  CHECK(std::abs(e.points[0].z2) < 1e-10);
  CHECK(e.points[0].orientation == Orientation::Minus);
  CHECK(e.I_minus == 1);
  const Json out = to_json(e);
  CHECK(out.at("points").size() == 1);
  CHECK(out.at("points")[0].at("orientation") == "N2-");
  CHECK(out.at("points")[0].at("index") == 1);
}
