#include "crsing/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "crsing/golden_rows.hpp"
#include "crsing/normalform.hpp"
#include "crsing/series.hpp"

namespace crsing {

namespace {

constexpr std::size_t kMaxListed = 5;

// Counts checks and keeps the first few failure messages.
class Checks {
public:
  bool operator()(bool ok, const std::string &msg) {
    ++total_;
    if (!ok) {
      ++failed_;
      if (failures_.size() < kMaxListed) failures_.push_back(msg);
    }
    return ok;
  }
  int failed() const { return failed_; }
  int total() const { return total_; }

  CriterionResult finish(int id, std::string name, std::string detail) const {
    CriterionResult r{id, std::move(name), failed_ == 0, std::move(detail), failures_};
    if (failed_ > 0)
      r.detail += "; " + std::to_string(failed_) + " of " + std::to_string(total_) + " checks failed";
    return r;
  }

private:
  int total_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cplx rnd(std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

CMat rnd_mat(std::mt19937_64 &rng, std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rnd(rng);
  return m;
}

CMat rnd_sym(std::mt19937_64 &rng, std::size_t n) {
  const CMat m = rnd_mat(rng, n);
  return cplx(0.5) * (m + m.transpose());
}

// (c, A) with |det A| in [0.1, 10] and |c| in [0.2, 5].
std::pair<cplx, CMat> rnd_group(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    CMat a = rnd_mat(rng, 2);
    const double d = std::abs(a.det());
    if (d < 1e-3) continue;
    a = cplx(std::sqrt(std::pow(10.0, 2.0 * u(rng) - 1.0) / d)) * a;
    return {std::polar(std::pow(5.0, 2.0 * u(rng) - 1.0), 2.0 * M_PI * u(rng)), a};
  }
}

// (R, S) -> (c conj(A)^T R A, c conj(A)^T S conj(A))
std::pair<CMat, CMat> act(cplx c, const CMat &a, const CMat &r, const CMat &s) {
  return {star_congruence(c, a, r), c * (a.adjoint() * s * a.conj())};
}

std::vector<Exps> keys4(int lo, int hi) {
  std::vector<Exps> out;
  for (int a = 0; a <= hi; ++a)
    for (int b = 0; a + b <= hi; ++b)
      for (int c = 0; a + b + c <= hi; ++c)
        for (int d = 0; a + b + c + d <= hi; ++d)
          if (a + b + c + d >= lo) out.push_back({a, b, c, d});
  return out;
}

PSeries flat_quadric(double g1, double g2, int trunc) {
  return quadratic_series(CMat::diag({g1, g2}), CMat::identity(2), CMat::diag({g1, g2}), trunc);
}

// Keys (a1, a2, b1, b2); left = conj(right) for each reality condition.
const std::vector<std::pair<Exps, Exps>> &condition_pairs() {
  static const std::vector<std::pair<Exps, Exps>> p = {
      {{1, 0, 2, 0}, {2, 0, 1, 0}}, {{0, 2, 0, 1}, {0, 1, 0, 2}}, {{1, 1, 1, 0}, {1, 0, 1, 1}},
      {{2, 0, 0, 1}, {0, 1, 2, 0}}, {{1, 1, 0, 1}, {0, 1, 1, 1}}, {{1, 0, 0, 2}, {0, 2, 1, 0}}};
  return p;
}

PSeries conditioned_cubic(std::mt19937_64 &rng, double g1, double g2) {
  PSeries h = flat_quadric(g1, g2, 3);
  for (const auto &k : keys4(3, 3)) h.set(k, rnd(rng));
  for (const auto &[l, r] : condition_pairs()) h.set(l, std::conj(h.coeff(r)));
  return h;
}

double max_coeff_diff(const PSeries &a, const PSeries &b) {
  double d = 0;
  for (const auto &[k, v] : a.terms()) d = std::max(d, std::abs(v - b.coeff(k)));
  for (const auto &[k, v] : b.terms()) d = std::max(d, std::abs(v - a.coeff(k)));
  return d;
}

std::string format_pair(cplx a, cplx b) {
  auto one = [](cplx z) { return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i"; };
  return one(a) + ", " + one(b);
}

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

CriterionResult criterion1(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-8 * opt.tol_scale;
  const auto t0 = std::chrono::steady_clock::now();
  const ChartedManifold m = cp2_iota(1.0);
  const Enumeration e = enumerate(m, {opt.seeds_per_axis, opt.convention});
  const double secs = seconds_since(t0);

  ck(e.points.size() == 7, "found " + std::to_string(e.points.size()) + " points, expected 7");
  const double r3 = std::sqrt(3.0);
  const cplx i(0, 1);
  const std::vector<std::array<cplx, 2>> affine{{0.0, 2.0}, {r3, 1.0}, {-r3, 1.0}, {3.0 * i, -1.0}, {-3.0 * i, -1.0}};
  int n_affine = 0, n_z1 = 0, n_z2 = 0;
  for (const auto &p : e.points) {
    if (p.chart == "z0=1") ++n_affine;
    if (p.chart == "z1=1" && ck(near(p.z1, 0.0, tol), "z1=1 point has z0 != 0")) ++n_z1;
    if (p.chart == "z2=1" && ck(near(p.z1, 0.0, tol), "z2=1 point has z0 != 0")) ++n_z2;
    ck(p.orientation == Orientation::Plus, "point in " + p.chart + " is not N2+");
    ck(p.index == PointIndex::Plus, "point in " + p.chart + " has index " + index_name(p.index));
  }
  for (const auto &a : affine) {
    bool hit = false;
    for (const auto &p : e.points)
      hit = hit || (p.chart == "z0=1" && near(p.z1, a[0], tol) && near(p.z2, a[1], tol));
    ck(hit, "affine point (" + format_pair(a[0], a[1]) + ") not found");
  }
  ck(n_affine == 5, "affine chart has " + std::to_string(n_affine) + " points");
  ck(n_z1 == 1, "z1=1 chart has " + std::to_string(n_z1) + " points at z0=0");
  ck(n_z2 == 1, "z2=1 chart has " + std::to_string(n_z2) + " points at z0=0");
  ck(e.I_plus == 7 && e.I_minus == 0,
     "sums (" + std::to_string(e.I_plus) + "," + std::to_string(e.I_minus) + "), expected (7,0)");
  const TopologyReport tr = topology_check(m, e.I_plus, e.I_minus, opt.convention);
  ck(tr.pass && tr.expected_sum == 7 && tr.expected_diff == 7, "topology identities 6d+d^3 = 7, chi+4d^2 = 7 fail");
  ck(secs <= 60.0, "runtime " + num(secs) + " s exceeds 60 s");
  return ck.finish(1, "CP2 family t=1",
                   std::to_string(e.points.size()) + " points, I+=" + std::to_string(e.I_plus) +
                       ", I-=" + std::to_string(e.I_minus) + ", topology " + std::to_string(tr.sum) + "/" +
                       std::to_string(tr.diff));
}

CriterionResult criterion2(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-10 * opt.tol_scale;
  const Chart ch = cp2_iota(1.0).charts[0];
  const PSeries t = chart_taylor(ch, 0.0, 2.0, 3);
  const std::vector<std::pair<Exps, double>> want{
      {{1, 0, 0, 0}, 4.0 / 15}, {{1, 1, 0, 0}, -1.0 / 25}, {{1, 0, 0, 1}, -1.0 / 25}, {{0, 1, 1, 0}, -1.0 / 30}};
  double worst = 0;
  for (const auto &k : keys4(0, 2)) {
    double w = 0;
    for (const auto &x : want)
      if (x.first == k) w = x.second;
    const double err = std::abs(t.coeff(k) - w);
    worst = std::max(worst, err);
    ck(err <= tol, "Taylor coefficient off by " + num(err));
  }
  const PSeries h = local_model(ch, 0.0, 2.0);
  const QuadData q = extract_QRS(h);
  ck(q.S.max_abs() <= tol, "S is not zero at (0,2)");
  const double dg = build_gamma(q.R, 2.0 * q.S.conj()).det().real();
  const double dr = std::norm(q.R.det());
  ck(std::abs(dg - dr) <= tol * dr, "det Gamma differs from |det R|^2");
  ck(dg > 0, "det Gamma is not positive");
  return ck.finish(2, "Taylor fixture at (0,2)",
                   "max coefficient error " + num(worst) + ", det Gamma = " + num(dg) + " = |det R|^2");
}

CriterionResult criterion3(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-9 * opt.tol_scale;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::array<double, 5>> sets{{1, 1, 1, 1, 1}, {1, 2, 3, 4, 5}, {2, 0.5, 0.3, 0.3, 7}};
  std::string summary;
  for (const auto &d : sets) {
    const Enumeration e = enumerate(s4_ellipsoid(d), {opt.seeds_per_axis, Convention::Lai});
    const std::string tag = "d=(" + num(d[0]) + "," + num(d[1]) + "," + num(d[2]) + "," + num(d[3]) + "," + num(d[4]) + ")";
    ck(e.points.size() == 2, tag + ": " + std::to_string(e.points.size()) + " points");
    ck(e.I_plus == 1 && e.I_minus == 1, tag + ": sums are not (1,1)");
    double g1 = std::abs(d[0] - d[1]) / (d[0] + d[1]), g2 = std::abs(d[2] - d[3]) / (d[2] + d[3]);
    if (g1 > g2) std::swap(g1, g2);
    for (const auto &p : e.points) {
      ck(dist(p.row.N, CMat::identity(2)) <= tol, tag + ": N is not the identity");
      ck(std::abs(p.row.P(0, 1)) + std::abs(p.row.P(1, 0)) <= tol, tag + ": P is not diagonal");
      for (std::size_t k = 0; k < 2; ++k) {
        const cplx v = p.row.P(k, k);
        ck(std::abs(v.imag()) <= tol && v.real() >= -tol && v.real() < 1.0, tag + ": P entry outside [0,1)");
      }
      ck(near(p.row.P(0, 0), g1, tol) && near(p.row.P(1, 1), g2, tol), tag + ": P entries differ from the ellipsoid axes");
    }
    summary += (summary.empty() ? "" : ", ") + tag + " P=(" + num(g1) + "," + num(g2) + ")";
  }
  const double secs = seconds_since(t0);
  ck(secs <= 10.0, "runtime " + num(secs) + " s exceeds 10 s");
  return ck.finish(3, "S4 ellipsoid", "2 points, I+=I-=1 for " + summary);
}

CriterionResult criterion4(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-9 * opt.tol_scale;
  const std::vector<std::array<double, 6>> sets{{1, 2, 1, 3, 5, 1}, {1, 2, 4, 3, 5, 0.3}};
  std::vector<std::vector<CMat>> ps;
  for (const auto &p : sets) {
    const Enumeration e = enumerate(s2xs2(p), {opt.seeds_per_axis, Convention::Lai});
    ck(e.points.size() == 4, std::to_string(e.points.size()) + " points, expected 4");
    ck(e.I_plus == 2 && e.I_minus == 2, "sums are not (2,2)");
    const double ga = std::abs(p[0] - p[1]) / (p[0] + p[1]), gd = std::abs(p[3] - p[4]) / (p[3] + p[4]);
    std::vector<CMat> here;
    for (const auto &pt : e.points) {
      ck(pt.index == PointIndex::Plus, "point " + pt.chart + " has index " + index_name(pt.index));
      const bool same = pt.chart == "eta=(+,+)" || pt.chart == "eta=(-,-)";
      ck(near(pt.row.P(0, 0), same ? ga : gd, tol) && near(pt.row.P(1, 1), same ? gd : ga, tol),
         "point " + pt.chart + ": P entries differ from |a-b|/(a+b), |d-e|/(d+e)");
      here.push_back(pt.row.P);
    }
    ps.push_back(here);
  }
  if (ps.size() == 2 && ps[0].size() == ps[1].size())
    for (std::size_t k = 0; k < ps[0].size(); ++k)
      ck(dist(ps[0][k], ps[1][k]) <= tol, "canonical P depends on c, f");
  return ck.finish(4, "S2xS2 product of ellipsoids",
                   "4 points of index +1, I+=I-=2, P=(1/3,1/4) for (1,2,1,3,5,1), unchanged for c=4, f=0.3");
}

CriterionResult criterion5(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-9 * opt.tol_scale;
  std::mt19937_64 rng(5005);
  double worst = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    const std::size_t n = trial < 1000 ? 2 : 3;
    const CMat r = rnd_mat(rng, n), s = rnd_mat(rng, n);
    const auto [rp, sp] = realify(r, s);
    const double lhs = (rp + sp).determinant();
    // [[R, S], [conj S, conj R]] is build_gamma(R, conj S).
    const cplx rhs = build_gamma(r, s.conj()).det();
    const double rel = std::abs(lhs - rhs) / (1 + std::abs(rhs));
    worst = std::max(worst, rel);
    ck(rel <= tol, std::to_string(n) + "x" + std::to_string(n) + " realified determinant off by " + num(rel));
  }
  double worst_h = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    PSeries h(2, 3);
    for (const auto &k : keys4(2, 3)) h.set(k, rnd(rng));
    const QuadData q = extract_QRS(h);
    const double dg = 16.0 * build_gamma(q.R, 2.0 * q.S.conj()).det().real();
    const double rel = std::abs(hessian_index(h).det - dg) / std::max(1.0, std::abs(dg));
    worst_h = std::max(worst_h, rel);
    ck(rel <= tol, "Hessian bridge off by " + num(rel));
  }
  return ck.finish(5, "Realified determinant identity and Hessian bridge",
                   "1000 2x2 + 200 3x3 pairs (max rel err " + num(worst) + "), 1000 series (max rel err " +
                       num(worst_h) + ")");
}

CriterionResult criterion6(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-6 * opt.tol_scale, wtol = 1e-8 * opt.tol_scale;
  std::mt19937_64 rng(6006);
  double worst_res = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CMat r = rnd_mat(rng, 2), s = rnd_sym(rng, 2);
    const auto [c, a] = rnd_group(rng);
    const auto [r2, s2] = act(c, a, r, s);
    const std::string tag = "pair " + std::to_string(trial) + ": ";
    try {
      const TableRow x = classify_pair(r, s), y = classify_pair(r2, s2);
      ck(x.r_case.kind == y.r_case.kind && x.shape == y.shape, tag + "case tag changed");
      ck(std::abs(x.r_case.param - y.r_case.param) <= tol * std::max(1.0, x.r_case.param), tag + "R modulus changed");
      bool same_moduli = x.moduli.size() == y.moduli.size();
      for (std::size_t k = 0; same_moduli && k < x.moduli.size(); ++k)
        same_moduli = std::abs(x.moduli[k].value - y.moduli[k].value) <= tol * std::max(1.0, std::abs(x.moduli[k].value));
      ck(same_moduli, tag + "moduli changed");
      ck(x.rho_P == y.rho_P && x.rho_NP == y.rho_NP && x.rho_Gamma == y.rho_Gamma && x.sigma_Gamma == y.sigma_Gamma,
         tag + "integer invariants changed");
      ck(x.det_sign == y.det_sign, tag + "det sign changed");
      const double rx = x.witness.residual / (1 + r.norm() + 2 * s.norm());
      const double ry = y.witness.residual / (1 + r2.norm() + 2 * s2.norm());
      worst_res = std::max({worst_res, rx, ry});
      ck(rx <= wtol && ry <= wtol, tag + "witness residual " + num(std::max(rx, ry)));
    } catch (const Error &e) {
      ck(false, tag + e.what());
    }
  }
  return ck.finish(6, "Orbit invariance", "1000 random pairs, max relative witness residual " + num(worst_res));
}

CriterionResult criterion7(const AcceptanceOptions &) {
  Checks ck;
  const auto rows = fixtures::golden_rows();
  for (const auto &g : rows) {
    try {
      const TableRow row = classify_pair(g.N, cplx(0.5) * g.P.conj());
      ck(row.shape == g.shape, g.label + ": shape " + row.shape);
      if (g.rho_P >= 0)
        ck(row.rho_P == g.rho_P && row.rho_NP == g.rho_NP && row.rho_Gamma == g.rho_Gamma,
           g.label + ": rank columns differ");
      if (g.sigma_Gamma >= 0)
        ck(row.sigma_Gamma && *row.sigma_Gamma == g.sigma_Gamma, g.label + ": sigma(Gamma) differs");
      if (g.moduli_dof >= 0) {
        int dof = 0;
        for (const auto &m : row.moduli) dof += m.dof;
        ck(dof == g.moduli_dof, g.label + ": " + std::to_string(dof) + " moduli");
      }
      ck(g.signs.find(det_sign_char(row.det_sign)) != std::string::npos,
         g.label + ": det sign " + det_sign_char(row.det_sign));
    } catch (const Error &e) {
      ck(false, g.label + ": " + e.what());
    }
  }
  return ck.finish(7, "Golden table rows", std::to_string(rows.size()) + " rows of the normal-form table and invariant tables");
}

CriterionResult criterion8(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-12 * opt.tol_scale;
  std::string signs;
  for (double g : {0.0, 0.25, 0.5, 0.6, 1.0}) {
    PSeries h(1, 2);
    h.set({1, 1}, 1.0);
    h.set({2, 0}, g);
    h.set({0, 2}, g);
    const QuadData q = extract_QRS(h);
    const double dg = build_gamma(q.R, 2.0 * q.S.conj()).det().real();
    ck(std::abs(dg - (1 - 4 * g * g)) <= tol, "gamma=" + num(g) + ": det Gamma = " + num(dg));
    const PointIndex pi = point_index(h, Orientation::Plus);
    const char s = pi == PointIndex::Plus ? '+' : pi == PointIndex::Minus ? '-' : '0';
    const char want = g < 0.5 ? '+' : g == 0.5 ? '0' : '-';
    ck(s == want, "gamma=" + num(g) + ": sign " + s);
    signs += s;
  }
  return ck.finish(8, "Bishop regression", "det Gamma = 1-4g^2 for g in {0,.25,.5,.6,1}, signs " + signs);
}

CriterionResult criterion9(const AcceptanceOptions &opt) {
  Checks ck;
  const double tol = 1e-10 * opt.tol_scale;
  std::mt19937_64 rng(9009);
  const std::vector<Exps> kept{{2, 1, 0, 0}, {0, 0, 2, 1}, {1, 2, 0, 0}, {0, 0, 1, 2}};
  for (int trial = 0; trial < 200; ++trial) {
    const PSeries h = conditioned_cubic(rng, 0.2, 0.4);
    const std::string tag = "input " + std::to_string(trial) + ": ";
    try {
      const FlattenResult f = cubic_flatten(h);
      ck(f.h.homogeneous(2) == h.homogeneous(2), tag + "quadratic part changed");
      const PSeries c3 = f.h.homogeneous(3);
      bool four = true;
      for (const auto &[k, v] : c3.terms()) four = four && std::find(kept.begin(), kept.end(), k) != kept.end();
      ck(four, tag + "cubic has monomials outside the four-monomial form");
      ck(max_coeff_diff(c3, c3.conjugate()) <= tol, tag + "cubic is not conjugate symmetric");
    } catch (const Error &e) {
      ck(false, tag + e.what());
    }
  }
  const auto &names = cubic_condition_names();
  for (std::size_t i = 0; i < condition_pairs().size(); ++i)
    for (int rep = 0; rep < 5; ++rep) {
      PSeries h = conditioned_cubic(rng, 0.2, 0.4);
      const Exps &l = condition_pairs()[i].first;
      h.set(l, h.coeff(l) + cplx(0.1 + 0.05 * rep, -0.03));
      bool named = false;
      try {
        cubic_flatten(h);
      } catch (const Error &e) {
        named = e.code() == ErrorCode::PreconditionViolated && std::string(e.what()).find(names[i]) != std::string::npos;
      }
      ck(named, "violating " + names[i] + " is not rejected by name");
    }
  return ck.finish(9, "Cubic flattening", "200 inputs at gamma=(0.2,0.4) flattened; 30 single violations rejected by name");
}

CriterionResult criterion10(const AcceptanceOptions &) {
  Checks ck;
  struct Combo {
    int rank_s, rank_rs;
    Quadric q;
  };
  const std::vector<Combo> combos{{2, 2, Quadric::W1sqW2sq}, {1, 2, Quadric::Z2W2W1sq}, {1, 1, Quadric::W1sq},
                                  {0, 2, Quadric::Z1W1Z2W2}, {0, 1, Quadric::Z1W1},     {0, 0, Quadric::Zero}};
  // Representatives of every rank combination.
  const std::vector<std::pair<CMat, CMat>> reps{
      {CMat::zeros(2, 2), CMat::identity(2)},           {CMat::diag({0.0, 1.0}), CMat::diag({1.0, 0.0})},
      {CMat::zeros(2, 2), CMat::diag({1.0, 0.0})},      {CMat::identity(2), CMat::zeros(2, 2)},
      {CMat::diag({1.0, 0.0}), CMat::zeros(2, 2)},      {CMat::zeros(2, 2), CMat::zeros(2, 2)}};
  for (std::size_t k = 0; k < combos.size(); ++k)
    ck(complexification_class(reps[k].first, reps[k].second) == combos[k].q,
       std::string("representative of ") + quadric_name(combos[k].q) + " misclassified");

  std::mt19937_64 rng(10010);
  for (int trial = 0; trial < 500; ++trial) {
    const Combo &cb = combos[std::size_t(trial) % combos.size()];
    // Random pair with the requested (rank S, rank (R|S)).
    CMat s = CMat::zeros(2, 2), r = CMat::zeros(2, 2);
    if (cb.rank_s == 2) s = rnd_sym(rng, 2);
    if (cb.rank_s == 1) {
      const CMat x{{rnd(rng)}, {rnd(rng)}};
      s = x * x.transpose();
    }
    if (cb.rank_rs > cb.rank_s) {
      if (cb.rank_rs == 2 && cb.rank_s == 0) r = rnd_mat(rng, 2);
      else if (cb.rank_rs == 1) {
        const CMat u{{rnd(rng)}, {rnd(rng)}}, v{{rnd(rng), rnd(rng)}};
        r = u * v;
      } else r = rnd_mat(rng, 2);
    } else if (cb.rank_s > 0) {
      r = s * rnd_mat(rng, 2); // columns of R inside the column space of S
    }
    const auto [c, a] = rnd_group(rng);
    const auto [r2, s2] = act(c, a, r, s);
    const Quadric q1 = complexification_class(r, s), q2 = complexification_class(r2, s2);
    ck(q1 == cb.q && q2 == cb.q, "orbit " + std::to_string(trial) + ": " + quadric_name(q1) + " -> " + quadric_name(q2) +
                                     ", expected " + quadric_name(cb.q));
  }
  return ck.finish(10, "Complexification classes", "6 rank combinations, 500 random orbits");
}

} // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions &opt) {
  static const std::vector<std::function<CriterionResult(const AcceptanceOptions &)>> table{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  if (id < 1 || id > int(table.size())) throw Error(ErrorCode::BadParams, "criterion id must be in [1, 10]");
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[std::size_t(id - 1)](opt);
  } catch (const Error &e) {
    r = {id, "criterion " + std::to_string(id), false, "aborted", {e.what()}};
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

std::string format_result_line(const CriterionResult &r) {
  std::string s = "criterion " + std::to_string(r.id) + ": " + (r.pass ? "PASS" : "FAIL") + "  " + r.name + " (" +
                  r.detail + ", " + num(r.seconds) + " s)";
  for (const auto &f : r.failures) s += "\n    - " + f;
  return s;
}

} // namespace crsing
