#include "crsing/json_io.hpp"

#include <cstdio>

namespace crsing {

namespace {

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

[[noreturn]] void schema_error(const std::string &what) { throw Error(ErrorCode::ParseError, what); }

template <class F>
auto guarded(const char *what, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception &e) {
    schema_error(std::string(what) + ": " + e.what());
  }
}

Json witness_json(const Witness &w) {
  return {{"c", to_json(w.c)}, {"A", to_json(w.A)}, {"residual", w.residual}};
}

} // namespace

Json to_json(cplx z) { return {{"re", clean_zero(z.real())}, {"im", clean_zero(z.imag())}}; }

cplx cplx_from_json(const Json &j) {
  return guarded("complex number", [&] {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    return cplx(j.at("re").get<double>(), j.value("im", 0.0));
  });
}

Json to_json(const CMat &m) {
  std::vector<double> re, im;
  for (const cplx &z : m.entries()) {
    re.push_back(clean_zero(z.real()));
    im.push_back(clean_zero(z.imag()));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMat cmat_from_json(const Json &j, double tol) {
  return guarded("matrix", [&] {
    if (j.is_array()) { // nested rows of numbers or {re, im}
      const std::size_t rows = j.size(), cols = rows ? j[0].size() : 0;
      std::vector<cplx> e;
      for (const auto &row : j) {
        if (!row.is_array() || row.size() != cols) schema_error("matrix rows must have equal length");
        for (const auto &x : row) e.push_back(cplx_from_json(x));
      }
      return CMat(rows, cols, std::move(e), tol);
    }
    const auto rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    if (re.size() != rows * cols || im.size() != rows * cols)
      schema_error("matrix entry count does not match rows x cols");
    std::vector<cplx> e(re.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = {re[i], im[i]};
    return CMat(rows, cols, std::move(e), tol);
  });
}

Json to_json(const PSeries &h) {
  Json terms = Json::array();
  const auto k = std::size_t(h.nvars());
  for (const auto &[key, v] : h.terms())
    terms.push_back({{"alpha", Exps(key.begin(), key.begin() + long(k))},
                     {"beta", Exps(key.begin() + long(k), key.end())},
                     {"re", clean_zero(v.real())},
                     {"im", clean_zero(v.imag())}});
  return {{"nvars", h.nvars()}, {"trunc", h.trunc()}, {"terms", terms}};
}

PSeries pseries_from_json(const Json &j) {
  return guarded("series", [&] {
    PSeries h(j.at("nvars").get<int>(), j.at("trunc").get<int>());
    for (const auto &t : j.at("terms")) {
      const auto a = t.at("alpha").get<Exps>(), b = t.at("beta").get<Exps>();
      if (int(a.size()) != h.nvars() || int(b.size()) != h.nvars())
        schema_error("term exponent length differs from nvars");
      if (degree(make_key(a, b)) > h.trunc()) schema_error("term above the truncation order");
      h.add(a, b, {t.at("re").get<double>(), t.value("im", 0.0)});
    }
    return h;
  });
}

Json to_json(const HoloChange &t) {
  Json p = Json::array();
  for (const auto &s : t.p) p.push_back(to_json(s));
  return {{"C", to_json(t.C)}, {"p", p}};
}

Json to_json(const TableRow &row) {
  Json moduli = Json::array();
  for (const auto &m : row.moduli) moduli.push_back({{"name", m.name}, {"value", to_json(m.value)}, {"dof", m.dof}});
  return {{"r_case", {{"kind", rkind_name(row.r_case.kind)}, {"param", row.r_case.param},
                      {"label", rcase_label(row.r_case)}}},
          {"N", to_json(row.N)},
          {"P", to_json(row.P)},
          {"shape", row.shape},
          {"moduli", moduli},
          {"rho_N", row.rho_N},
          {"sigma_N", row.sigma_N ? Json(*row.sigma_N) : Json(nullptr)},
          {"rho_P", row.rho_P},
          {"rho_NP", row.rho_NP},
          {"rho_Gamma", row.rho_Gamma},
          {"sigma_Gamma", row.sigma_Gamma ? Json(*row.sigma_Gamma) : Json(nullptr)},
          {"det_sign", std::string(1, det_sign_char(row.det_sign))},
          {"witness", witness_json(row.witness)},
          {"boundary", row.boundary}};
}

Json to_json(const Topology &t) {
  if (t.target == Topology::Target::C3) return {{"target", "C3"}, {"chi", t.chi}, {"p1", t.p1}};
  return {{"target", "CP3"}, {"chi", t.chi}, {"degree", t.degree}};
}

Json to_json(const TopologyReport &r) {
  return {{"pass", r.pass},
          {"sum", r.sum},
          {"diff", r.diff},
          {"expected_sum", r.expected_sum},
          {"expected_diff", r.expected_diff},
          {"mismatches", r.mismatches}};
}

Json to_json(const CRPoint &p) {
  Json amb = Json::array();
  for (const cplx &z : p.ambient) amb.push_back(to_json(z));
  return {{"chart", p.chart},
          {"location", {to_json(p.z1), to_json(p.z2)}},
          {"ambient", amb},
          {"orientation", orientation_name(p.orientation)},
          {"index", p.index == PointIndex::Degenerate ? Json("degenerate") : Json(index_value(p.index))},
          {"table_row", to_json(p.row)},
          {"residual", p.residual},
          {"on_boundary", p.on_boundary},
          {"snapped", p.snapped}};
}

Json to_json(const Enumeration &e) {
  Json pts = Json::array();
  for (const auto &p : e.points) pts.push_back(to_json(p));
  return {{"points", pts},
          {"I_plus", e.I_plus},
          {"I_minus", e.I_minus},
          {"degenerate", e.degenerate},
          {"general_position", e.general_position},
          {"identically_critical", e.identically_critical},
          {"no_convergence", e.no_convergence},
          {"boundary", e.boundary},
          {"warnings", e.warnings}};
}

ChartedManifold manifold_from_json(const Json &j) {
  return guarded("manifest", [&] {
    ChartedManifold m;
    m.name = j.value("name", std::string("manifest"));
    m.projective = j.value("projective", false);
    if (j.contains("topology")) {
      const Json &t = j.at("topology");
      Topology top;
      const std::string target = t.at("target").get<std::string>();
      if (target == "C3") {
        top.target = Topology::Target::C3;
        top.p1 = t.at("p1").get<int>();
      } else if (target == "CP3") {
        top.target = Topology::Target::CP3;
        top.degree = t.at("degree").get<int>();
      } else {
        schema_error("topology target must be C3 or CP3");
      }
      top.chi = t.at("chi").get<int>();
      m.expected_topology = top;
    }
    const Json &charts = j.at("charts");
    if (!charts.is_array() || charts.empty()) schema_error("manifest needs a non-empty chart list");
    for (const auto &c : charts) {
      Chart ch;
      ch.id = c.at("id").get<std::string>();
      ch.num = pseries_from_json(c.at("num"));
      ch.den = c.contains("den") ? pseries_from_json(c.at("den")) : PSeries(2, 0);
      if (ch.num.nvars() != 2 || ch.den.nvars() != 2) schema_error("chart polynomials need nvars = 2");
      if (c.contains("roots"))
        for (const auto &r : c.at("roots")) {
          RootTerm rt{cplx_from_json(r.at("coef")), pseries_from_json(r.at("radicand"))};
          if (rt.radicand.nvars() != 2) schema_error("radicands need nvars = 2");
          ch.roots.push_back(std::move(rt));
        }
      const auto lo = c.at("box").at("lo").get<std::vector<double>>();
      const auto hi = c.at("box").at("hi").get<std::vector<double>>();
      if (lo.size() != 4 || hi.size() != 4) schema_error("box bounds need four entries");
      std::copy(lo.begin(), lo.end(), ch.lo.begin());
      std::copy(hi.begin(), hi.end(), ch.hi.begin());
      ch.orientation = c.value("orientation", 1);
      if (ch.orientation != 1 && ch.orientation != -1) schema_error("orientation must be +1 or -1");
      if (c.contains("pin_z1")) ch.pin_z1 = cplx_from_json(c.at("pin_z1"));
      m.charts.push_back(std::move(ch));
    }
    return m;
  });
}

Json parse_json(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception &e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
}

std::string format_cplx(cplx z) {
  const double re = clean_zero(z.real()), im = clean_zero(z.imag());
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g%c%.12gi", re, im < 0 ? '-' : '+', std::abs(im));
  return buf;
}

} // namespace crsing
