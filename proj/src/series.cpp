#include "crsing/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crsing {

int degree(const Exps &key) { return std::accumulate(key.begin(), key.end(), 0); }

Exps make_key(const Exps &alpha, const Exps &beta) {
  Exps k(alpha);
  k.insert(k.end(), beta.begin(), beta.end());
  return k;
}

PSeries::PSeries(int nvars, int trunc) : nvars_(nvars), trunc_(trunc) {
  if (nvars < 1) throw Error(ErrorCode::BadParams, "series needs at least one variable");
  if (trunc < 0) throw Error(ErrorCode::BadParams, "negative truncation order");
}

cplx PSeries::coeff(const Exps &key) const {
  const auto it = terms_.find(key);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

cplx PSeries::coeff(const Exps &alpha, const Exps &beta) const {
  return coeff(make_key(alpha, beta));
}

void PSeries::set(const Exps &key, cplx v) {
  if (int(key.size()) != 2 * nvars_)
    throw Error(ErrorCode::DimensionMismatch, "exponent vector has the wrong length");
  if (std::any_of(key.begin(), key.end(), [](int e) { return e < 0; }))
    throw Error(ErrorCode::BadParams, "negative exponent");
  if (degree(key) > trunc_) return;
  if (v == cplx(0.0)) terms_.erase(key);
  else terms_[key] = v;
}

void PSeries::set(const Exps &alpha, const Exps &beta, cplx v) { set(make_key(alpha, beta), v); }

void PSeries::add(const Exps &alpha, const Exps &beta, cplx v) {
  const Exps k = make_key(alpha, beta);
  set(k, coeff(k) + v);
}

double PSeries::max_abs() const {
  double m = 0;
  for (const auto &[k, v] : terms_) m = std::max(m, std::abs(v));
  return m;
}

PSeries PSeries::homogeneous(int d) const {
  PSeries out(nvars_, trunc_);
  for (const auto &[k, v] : terms_)
    if (degree(k) == d) out.terms_[k] = v;
  return out;
}

PSeries PSeries::truncated(int t) const {
  PSeries out(nvars_, t);
  for (const auto &[k, v] : terms_)
    if (degree(k) <= t) out.terms_[k] = v;
  return out;
}

PSeries PSeries::conjugate() const {
  PSeries out(nvars_, trunc_);
  for (const auto &[k, v] : terms_) {
    Exps s(k.begin() + nvars_, k.end());
    s.insert(s.end(), k.begin(), k.begin() + nvars_);
    out.terms_[s] = std::conj(v);
  }
  return out;
}

bool PSeries::is_holomorphic() const {
  for (const auto &[k, v] : terms_)
    for (int i = nvars_; i < 2 * nvars_; ++i)
      if (k[i] != 0) return false;
  return true;
}

bool PSeries::standard_position(double eps) const {
  const double bound = eps * std::max(1.0, max_abs());
  for (const auto &[k, v] : terms_)
    if (degree(k) <= 1 && std::abs(v) > bound) return false;
  return true;
}

namespace {

// Polynomial in m variables truncated at total degree trunc.
struct Poly {
  int m = 0, trunc = 0;
  std::map<Exps, cplx> c;
};

Poly var(int m, int trunc, int i) {
  Poly p{m, trunc, {}};
  Exps e(m, 0);
  e[i] = 1;
  p.c[e] = 1.0;
  return p;
}

Poly constant(int m, int trunc, cplx v) {
  Poly p{m, trunc, {}};
  if (v != cplx(0.0)) p.c[Exps(m, 0)] = v;
  return p;
}

void add_into(Poly &a, const Poly &b, cplx s = 1.0) {
  for (const auto &[k, v] : b.c) a.c[k] += s * v;
}

Poly mul(const Poly &a, const Poly &b) {
  Poly out{a.m, a.trunc, {}};
  for (const auto &[ka, va] : a.c) {
    const int da = degree(ka);
    for (const auto &[kb, vb] : b.c) {
      if (da + degree(kb) > a.trunc) continue;
      Exps k(ka);
      for (int i = 0; i < a.m; ++i) k[i] += kb[i];
      out.c[k] += va * vb;
    }
  }
  return out;
}

// sum_k terms[k] prod_i vals[i]^k_i, with vals polynomials in m variables.
Poly substitute(const std::map<Exps, cplx> &terms, const std::vector<Poly> &vals, int m, int trunc) {
  const std::size_t nv = vals.size();
  std::vector<std::vector<Poly>> pw(nv);
  auto power = [&](std::size_t i, int e) -> const Poly & {
    auto &v = pw[i];
    if (v.empty()) v.push_back(constant(m, trunc, 1.0));
    while (int(v.size()) <= e) v.push_back(mul(v.back(), vals[i]));
    return v[std::size_t(e)];
  };
  Poly out{m, trunc, {}};
  for (const auto &[k, v] : terms) {
    Poly term = constant(m, trunc, v);
    for (std::size_t i = 0; i < nv && !term.c.empty(); ++i)
      if (k[i] > 0) term = mul(term, power(i, k[i]));
    add_into(out, term);
  }
  return out;
}

double poly_max(const Poly &p) {
  double m = 0;
  for (const auto &[k, v] : p.c) m = std::max(m, std::abs(v));
  return m;
}

double poly_dist(const Poly &a, const Poly &b) {
  double d = 0;
  for (const auto &[k, v] : a.c) {
    const auto it = b.c.find(k);
    d = std::max(d, std::abs(v - (it == b.c.end() ? cplx(0) : it->second)));
  }
  for (const auto &[k, v] : b.c)
    if (!a.c.count(k)) d = std::max(d, std::abs(v));
  return d;
}

Poly from_series(const PSeries &h) { return Poly{2 * h.nvars(), h.trunc(), h.terms()}; }

// Holomorphic series in n variables (keys of length 2n) as a Poly in n variables.
Poly holo_poly(const PSeries &p, int trunc, bool conj) {
  Poly out{p.nvars(), trunc, {}};
  for (const auto &[k, v] : p.terms())
    if (degree(k) <= trunc) out.c[Exps(k.begin(), k.begin() + p.nvars())] = conj ? std::conj(v) : v;
  return out;
}

PSeries to_series(const Poly &p, int nvars, int trunc, double clean_rel) {
  PSeries out(nvars, trunc);
  const double cut = clean_rel * poly_max(p);
  for (const auto &[k, v] : p.c)
    if (std::abs(v) > cut && v != cplx(0.0)) out.set(k, v);
  return out;
}

void require_standard(const PSeries &h) {
  if (!h.standard_position())
    throw Error(ErrorCode::NotStandardPosition, "series has constant or linear terms");
}

void validate_change(const HoloChange &t, int k) {
  const int n = t.n();
  if (n != k + 1 || !t.C.square())
    throw Error(ErrorCode::DimensionMismatch, "coordinate change has the wrong dimension");
  if (int(t.p.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "coordinate change needs one polynomial per coordinate");
  for (int j = 0; j + 1 < n; ++j)
    if (t.C(std::size_t(n - 1), std::size_t(j)) != cplx(0.0))
      throw Error(ErrorCode::BadParams, "last row of C must be (0, ..., 0, c_nn)");
  for (const auto &pk : t.p) {
    if (pk.nvars() != n || !pk.is_holomorphic())
      throw Error(ErrorCode::BadParams, "polynomial part must be holomorphic in all coordinates");
    for (const auto &[key, v] : pk.terms())
      if (degree(key) < 2) throw Error(ErrorCode::BadParams, "polynomial part must have degree >= 2");
  }
}

} // namespace

HoloChange HoloChange::identity(int n, int trunc) {
  HoloChange t;
  t.C = CMat::identity(std::size_t(n));
  for (int k = 0; k < n; ++k) t.p.emplace_back(n, trunc);
  return t;
}

void HoloChange::set_p(int k, const Exps &alpha, cplx v) {
  p.at(std::size_t(k)).set(alpha, Exps(alpha.size(), 0), v);
}

cplx HoloChange::p_coeff(int k, const Exps &alpha) const {
  return p.at(std::size_t(k)).coeff(alpha, Exps(alpha.size(), 0));
}

QuadData extract_QRS(const PSeries &h) {
  require_standard(h);
  const int k = h.nvars();
  QuadData q{CMat::zeros(k, k), CMat::zeros(k, k), CMat::zeros(k, k)};
  for (const auto &[key, v] : h.terms()) {
    if (degree(key) != 2) continue;
    std::vector<int> zs, ws; // indices of z and conj z factors
    for (int i = 0; i < k; ++i) {
      for (int e = 0; e < key[i]; ++e) zs.push_back(i);
      for (int e = 0; e < key[k + i]; ++e) ws.push_back(i);
    }
    if (zs.size() == 2) {
      // z_i z_j with i != j appears as Q_ij + Q_ji.
      const auto i = std::size_t(zs[0]), j = std::size_t(zs[1]);
      if (i == j) q.Q(i, i) = v;
      else q.Q(i, j) = q.Q(j, i) = v / 2.0;
    } else if (ws.size() == 2) {
      const auto i = std::size_t(ws[0]), j = std::size_t(ws[1]);
      if (i == j) q.S(i, i) = v;
      else q.S(i, j) = q.S(j, i) = v / 2.0;
    } else {
      q.R(std::size_t(ws[0]), std::size_t(zs[0])) = v; // conj z_i z_j -> R_ij
    }
  }
  return q;
}

PSeries quadratic_series(const CMat &Q, const CMat &R, const CMat &S, int trunc) {
  const int k = int(R.rows());
  PSeries h(k, trunc);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Exps zi(k, 0), zj(k, 0), zz(k, 0);
      zz[i] += 1;
      zz[j] += 1;
      zi[i] = 1;
      zj[j] = 1;
      const Exps zero(k, 0);
      h.add(zz, zero, Q(std::size_t(i), std::size_t(j)));
      h.add(zero, zz, S(std::size_t(i), std::size_t(j)));
      h.add(zj, zi, R(std::size_t(i), std::size_t(j)));
    }
  return h;
}

PSeries eliminate_Q(const PSeries &h) {
  // z_n -> z_n + z^T (conj S - Q) z moves only the (2,0) coefficients.
  const QuadData q = extract_QRS(h);
  const CMat target = q.S.conj();
  const int k = h.nvars();
  PSeries out = h;
  const Exps zero(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Exps zz(k, 0);
      zz[i] += 1;
      zz[j] += 1;
      const cplx v = i == j ? target(std::size_t(i), std::size_t(i))
                            : 2.0 * target(std::size_t(i), std::size_t(j));
      out.set(zz, zero, v);
    }
  return out;
}

PSeries apply_change(const PSeries &h, const HoloChange &t) {
  const int trunc = h.trunc();
  if (trunc < 2) throw Error(ErrorCode::TruncationTooLow, "truncation order must be at least 2");
  require_standard(h);
  const int k = h.nvars(), n = k + 1, m = 2 * k;
  validate_change(t, k);
  const cplx cnn = t.C(std::size_t(k), std::size_t(k));
  MatrixXcd b(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) b(i, j) = t.C(std::size_t(i), std::size_t(j));
  Eigen::FullPivLU<MatrixXcd> lu(b);
  if (cnn == cplx(0.0) || !lu.isInvertible())
    throw Error(ErrorCode::NonInvertibleC, "linear part of the change is singular");
  const MatrixXcd binv = lu.inverse();

  const Poly hp = from_series(h);
  const Poly hb = from_series(h.conjugate());
  std::vector<Poly> pk, pkb;
  for (int j = 0; j < n; ++j) {
    pk.push_back(holo_poly(t.p[std::size_t(j)], trunc, false));
    pkb.push_back(holo_poly(t.p[std::size_t(j)], trunc, true));
  }

  // Invert the tangential change: with Z = B u + phi(u, v) and W its
  // conjugate, iterate u <- B^{-1}(Z - phi), v <- conj(B)^{-1}(W - conj phi).
  // Each pass fixes one more degree.
  const auto kk = static_cast<std::size_t>(k);
  std::vector<Poly> zv(kk), wv(kk), u(kk), v(kk);
  for (int i = 0; i < k; ++i) {
    zv[std::size_t(i)] = var(m, trunc, i);
    wv[std::size_t(i)] = var(m, trunc, k + i);
  }
  auto lin = [&](const std::vector<Poly> &rhs, bool conj) {
    std::vector<Poly> out(std::size_t(k), Poly{m, trunc, {}});
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const cplx c = conj ? std::conj(binv(i, j)) : binv(i, j);
        if (c != cplx(0.0)) add_into(out[std::size_t(i)], rhs[std::size_t(j)], c);
      }
    return out;
  };
  u = lin(zv, false);
  v = lin(wv, true);
  auto eval_h = [&](const Poly &series, const std::vector<Poly> &uu, const std::vector<Poly> &vv) {
    std::vector<Poly> args(uu);
    args.insert(args.end(), vv.begin(), vv.end());
    return substitute(series.c, args, m, trunc);
  };
  for (int it = 0; it < trunc; ++it) {
    const Poly H = eval_h(hp, u, v), Hb = eval_h(hb, u, v);
    std::vector<Poly> ru(zv), rv(wv);
    std::vector<Poly> args(u), argsb(v);
    args.push_back(H);
    argsb.push_back(Hb);
    for (int j = 0; j < k; ++j) {
      const cplx cj = t.C(std::size_t(j), std::size_t(k));
      Poly phi = substitute(pk[std::size_t(j)].c, args, m, trunc);
      Poly phib = substitute(pkb[std::size_t(j)].c, argsb, m, trunc);
      add_into(phi, H, cj);
      add_into(phib, Hb, std::conj(cj));
      add_into(ru[std::size_t(j)], phi, -1.0);
      add_into(rv[std::size_t(j)], phib, -1.0);
    }
    std::vector<Poly> un = lin(ru, false), vn = lin(rv, true);
    double change = 0, scale = 0;
    for (int i = 0; i < k; ++i) {
      change = std::max({change, poly_dist(un[std::size_t(i)], u[std::size_t(i)]),
                         poly_dist(vn[std::size_t(i)], v[std::size_t(i)])});
      scale = std::max({scale, poly_max(un[std::size_t(i)]), poly_max(vn[std::size_t(i)])});
    }
    u = std::move(un);
    v = std::move(vn);
    if (change == 0.0 || change <= 1e-16 * scale) break;
  }
  const Poly H = eval_h(hp, u, v);
  std::vector<Poly> args(u);
  args.push_back(H);
  Poly out = substitute(pk[std::size_t(k)].c, args, m, trunc);
  add_into(out, H, cnn);
  return to_series(out, k, trunc, 1e-13);
}

HoloChange compose(const HoloChange &t2, const HoloChange &t1, int trunc) {
  const int n = t1.n();
  if (t2.n() != n) throw Error(ErrorCode::DimensionMismatch, "changes act on different spaces");
  // F1 as n polynomials in n variables, then F2 evaluated on them.
  std::vector<Poly> f1;
  for (int j = 0; j < n; ++j) {
    Poly fj = holo_poly(t1.p[std::size_t(j)], trunc, false);
    for (int i = 0; i < n; ++i) {
      const cplx c = t1.C(std::size_t(j), std::size_t(i));
      if (c != cplx(0.0)) add_into(fj, var(n, trunc, i), c);
    }
    f1.push_back(std::move(fj));
  }
  HoloChange out = HoloChange::identity(n, trunc);
  out.C = t2.C * t1.C;
  for (int j = 0; j < n; ++j) {
    Poly fj = substitute(holo_poly(t2.p[std::size_t(j)], trunc, false).c, f1, n, trunc);
    for (int i = 0; i < n; ++i) {
      const cplx c = t2.C(std::size_t(j), std::size_t(i));
      if (c != cplx(0.0)) add_into(fj, f1[std::size_t(i)], c);
    }
    for (const auto &[key, v] : fj.c)
      if (degree(key) >= 2 && v != cplx(0.0)) out.set_p(j, key, v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cubic flattening for the two-variable flat quadric
// z1 conj z1 + g1 (z1^2 + conj z1^2) + z2 conj z2 + g2 (z2^2 + conj z2^2).

namespace {

// Cubic coefficient e^{a1 b1 a2 b2} of z1^a1 conj(z1)^b1 z2^a2 conj(z2)^b2.
Exps ekey(int a1, int b1, int a2, int b2) { return {a1, a2, b1, b2}; }

struct CondPair {
  Exps lhs, rhs; // lhs = conj(rhs)
};

const std::vector<CondPair> &cubic_conditions() {
  static const std::vector<CondPair> c = {
      {ekey(1, 2, 0, 0), ekey(2, 1, 0, 0)}, {ekey(0, 0, 2, 1), ekey(0, 0, 1, 2)},
      {ekey(1, 1, 1, 0), ekey(1, 1, 0, 1)}, {ekey(2, 0, 0, 1), ekey(0, 2, 1, 0)},
      {ekey(1, 0, 1, 1), ekey(0, 1, 1, 1)}, {ekey(1, 0, 0, 2), ekey(0, 1, 2, 0)},
  };
  return c;
}

// A real-affine target: the listed combination of cubic coefficients.
struct Target {
  Exps key;
  Exps conj_key; // if nonempty, the target is e[key] - conj(e[conj_key])
};

cplx eval_target(const PSeries &h, const Target &t) {
  cplx v = h.coeff(t.key);
  if (!t.conj_key.empty()) v -= std::conj(h.coeff(t.conj_key));
  return v;
}

// A free parameter of the change: coordinate k, monomial alpha (length 3),
// or the linear entry C(k, 2) when alpha is empty.
struct Param {
  int k;
  Exps alpha;
};

HoloChange change_from(const std::vector<Param> &ps, const Eigen::VectorXd &x, int trunc) {
  HoloChange t = HoloChange::identity(3, trunc);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const cplx v(x(Eigen::Index(2 * i)), x(Eigen::Index(2 * i + 1)));
    if (ps[i].alpha.empty()) t.C(std::size_t(ps[i].k), 2) = v;
    else t.set_p(ps[i].k, ps[i].alpha, v);
  }
  return t;
}

// With C's diagonal fixed at 1 every cubic coefficient of the new series is
// real-affine in the parameters, so one linear solve is exact.
HoloChange solve_stage(const PSeries &h, const std::vector<Param> &ps, const std::vector<Target> &ts,
                       const std::string &stage) {
  const PSeries h3 = h.truncated(3);
  const Eigen::Index nx = Eigen::Index(2 * ps.size()), ny = Eigen::Index(2 * ts.size());
  auto residual = [&](const Eigen::VectorXd &x) {
    const PSeries out = apply_change(h3, change_from(ps, x, 3));
    Eigen::VectorXd r(ny);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const cplx v = eval_target(out, ts[i]);
      r(Eigen::Index(2 * i)) = v.real();
      r(Eigen::Index(2 * i + 1)) = v.imag();
    }
    return r;
  };
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nx);
  const Eigen::VectorXd r0 = residual(x0);
  Eigen::MatrixXd jac(ny, nx);
  for (Eigen::Index j = 0; j < nx; ++j) {
    Eigen::VectorXd e = x0;
    e(j) = 1.0;
    jac.col(j) = residual(e) - r0;
  }
  const Eigen::VectorXd x = jac.completeOrthogonalDecomposition().solve(-r0);
  const double scale = std::max(1.0, h3.homogeneous(3).max_abs());
  const double res = (jac * x + r0).norm();
  if (res > 1e-10 * scale)
    throw Error(ErrorCode::ResidualTooLarge,
                stage + ": linear system for the change is inconsistent (residual " +
                    std::to_string(res) + ")");
  return change_from(ps, x, h.trunc());
}

void require_conditions(const PSeries &h, const std::vector<int> &which, const std::string &stage) {
  const auto bad = violated_cubic_conditions(h);
  for (int i : which)
    if (std::find(bad.begin(), bad.end(), i) != bad.end())
      throw Error(ErrorCode::ResidualTooLarge,
                  "reality condition " + cubic_condition_names()[std::size_t(i)] + " lost after " + stage);
}

} // namespace

const std::vector<std::string> &cubic_condition_names() {
  static const std::vector<std::string> names = {
      "e1200=conj(e2100)", "e0021=conj(e0012)", "e1110=conj(e1101)",
      "e2001=conj(e0210)", "e1011=conj(e0111)", "e1002=conj(e0120)",
  };
  return names;
}

std::vector<int> violated_cubic_conditions(const PSeries &h, double tol) {
  if (h.nvars() != 2) throw Error(ErrorCode::DimensionMismatch, "cubic conditions need two variables");
  const double scale = std::max(1.0, h.homogeneous(3).max_abs());
  std::vector<int> out;
  const auto &cs = cubic_conditions();
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (std::abs(h.coeff(cs[i].lhs) - std::conj(h.coeff(cs[i].rhs))) > tol * scale)
      out.push_back(int(i));
  return out;
}

FlattenResult cubic_flatten(const PSeries &h) {
  if (h.nvars() != 2) throw Error(ErrorCode::PreconditionViolated, "flattening needs two tangential variables");
  require_standard(h);
  if (h.trunc() < 3) throw Error(ErrorCode::TruncationTooLow, "flattening needs truncation >= 3");

  // Quadratic part must be the flat form with 0 < g1 < g2, g != 1/2.
  const QuadData q = extract_QRS(h);
  const double qs = 1e-12 * std::max(1.0, q.R.max_abs() + q.S.max_abs());
  const double g1 = q.Q(0, 0).real(), g2 = q.Q(1, 1).real();
  const CMat expect_q = CMat::diag({g1, g2});
  if (dist(q.R, CMat::identity(2)) > qs || dist(q.Q, expect_q) > qs || dist(q.S, expect_q) > qs)
    throw Error(ErrorCode::PreconditionViolated,
                "quadratic part is not z1 conj z1 + g1 (z1^2 + conj z1^2) + z2 conj z2 + g2 (z2^2 + conj z2^2)");
  if (!(0.0 < g1 && g1 < g2))
    throw Error(ErrorCode::PreconditionViolated, "gamma: need 0 < gamma1 < gamma2");
  if (std::abs(g1 - 0.5) <= 1e-12 || std::abs(g2 - 0.5) <= 1e-12)
    throw Error(ErrorCode::PreconditionViolated, "gamma: gamma1 and gamma2 must differ from 1/2");
  const auto bad = violated_cubic_conditions(h);
  if (!bad.empty())
    throw Error(ErrorCode::PreconditionViolated,
                "cubic condition " + cubic_condition_names()[std::size_t(bad.front())] + " fails");

  const int trunc = h.trunc();
  PSeries cur = h;
  HoloChange total = HoloChange::identity(3, trunc);
  auto run = [&](const std::vector<Param> &ps, const std::vector<Target> &ts, const std::string &name) {
    const HoloChange t = solve_stage(cur, ps, ts, name);
    cur = apply_change(cur, t);
    total = compose(t, total, trunc);
  };

  // Terms in z1, conj z1 only: z1 += c13 z3 + p z1^2, z3 += p z1^3.
  run({{0, {}}, {0, {2, 0, 0}}, {2, {3, 0, 0}}},
      {{ekey(3, 0, 0, 0), {}}, {ekey(2, 1, 0, 0), {}}, {ekey(1, 2, 0, 0), {}}, {ekey(0, 3, 0, 0), {}}},
      "z1 stage");
  require_conditions(cur, {1, 2, 3, 4, 5}, "the z1 stage");
  // Terms in z2, conj z2 only.
  run({{1, {}}, {1, {0, 2, 0}}, {2, {0, 3, 0}}},
      {{ekey(0, 0, 3, 0), {}}, {ekey(0, 0, 2, 1), {}}, {ekey(0, 0, 1, 2), {}}, {ekey(0, 0, 0, 3), {}}},
      "z2 stage");
  require_conditions(cur, {2, 3, 4, 5}, "the z2 stage");
  // The eight mixed coefficients paired by the reality conditions.
  run({{0, {1, 1, 0}}, {0, {0, 2, 0}}, {1, {1, 1, 0}}, {1, {2, 0, 0}}},
      {{ekey(1, 1, 1, 0), {}}, {ekey(1, 1, 0, 1), {}}, {ekey(2, 0, 0, 1), {}}, {ekey(0, 2, 1, 0), {}},
       {ekey(1, 0, 1, 1), {}}, {ekey(0, 1, 1, 1), {}}, {ekey(1, 0, 0, 2), {}}, {ekey(0, 1, 2, 0), {}}},
      "mixed stage");
  // Holomorphic cubics in z3 make the last two pairs conjugate.
  run({{2, {2, 1, 0}}, {2, {1, 2, 0}}},
      {{ekey(2, 0, 1, 0), ekey(0, 2, 0, 1)}, {ekey(1, 0, 2, 0), ekey(0, 1, 0, 2)}}, "holomorphic stage");

  // Everything else in the cubic part is now rounding noise; remove it.
  const double cut = 1e-12 * std::max(1.0, h.homogeneous(3).max_abs());
  const std::vector<Exps> keep = {ekey(2, 0, 1, 0), ekey(0, 2, 0, 1), ekey(1, 0, 2, 0), ekey(0, 1, 0, 2)};
  const PSeries cubic = cur.homogeneous(3);
  for (const auto &[key, v] : cubic.terms()) {
    if (std::find(keep.begin(), keep.end(), key) != keep.end()) continue;
    if (std::abs(v) > cut)
      throw Error(ErrorCode::ResidualTooLarge,
                  "cubic coefficient outside the normal form survived at z^(" + std::to_string(key[0]) +
                      "," + std::to_string(key[1]) + ") conj z^(" + std::to_string(key[2]) + "," +
                      std::to_string(key[3]) + "): " + std::to_string(std::abs(v)));
    cur.set(key, 0.0);
  }
  return {cur, total};
}

char sign_char(Sign s) { return s == Sign::Plus ? '+' : s == Sign::Minus ? '-' : '0'; }

Eigen::MatrixXd hessian_matrix(const PSeries &h) {
  require_standard(h);
  const int k = h.nvars();
  if (k != 1 && k != 2)
    throw Error(ErrorCode::DimensionMismatch, "Hessian index is defined here for one or two variables");
  const QuadData q = extract_QRS(h);
  // Rows (x_i, y_i) are (f1_x - f2_y, f1_y + f2_x) with f = f1 + i f2 = h.
  // In Wirtinger terms block (i, j) only involves a = h_{conj z_i z_j} = R_ij
  // and b = h_{conj z_i conj z_j} = 2 S_ij; the z z derivatives cancel.
  Eigen::MatrixXd out(2 * k, 2 * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const cplx a = q.R(std::size_t(i), std::size_t(j));
      const cplx b = 2.0 * q.S(std::size_t(i), std::size_t(j));
      out(2 * i, 2 * j) = 2.0 * (a + b).real();
      out(2 * i, 2 * j + 1) = 2.0 * (b - a).imag();
      out(2 * i + 1, 2 * j) = 2.0 * (a + b).imag();
      out(2 * i + 1, 2 * j + 1) = 2.0 * (a - b).real();
    }
  return out;
}

HessianIndex hessian_index(const PSeries &h) {
  const Eigen::MatrixXd m = hessian_matrix(h);
  HessianIndex out;
  out.det = m.determinant();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  const double cut = 1e-10 * std::pow(scale, double(m.rows()));
  out.sign = out.det > cut ? Sign::Plus : out.det < -cut ? Sign::Minus : Sign::Zero;
  return out;
}

} // namespace crsing
