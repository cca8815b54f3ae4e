#include "crsing/normalform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace crsing {

namespace {

using M2 = Eigen::Matrix2cd;
using V2 = Eigen::Vector2cd;
constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

// Witnesses must meet this bound; closed forms usually land near 1e-15.
double accept_bound(double nr, double np) { return 1e-8 * (1.0 + nr + np); }

M2 to2(const CMat &m) {
  if (m.rows() != 2 || m.cols() != 2)
    throw Error(ErrorCode::DimensionMismatch, "expected a 2x2 matrix");
  M2 e;
  e << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return e;
}

CMat from2(const M2 &e) { return CMat{{e(0, 0), e(0, 1)}, {e(1, 0), e(1, 1)}}; }

M2 diag2(cplx a, cplx b) {
  M2 m = M2::Zero();
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

M2 cols2(const V2 &a, const V2 &b) {
  M2 m;
  m.col(0) = a;
  m.col(1) = b;
  return m;
}

const M2 kSwap = (M2() << 0, 1, 1, 0).finished();
const M2 kHyp = diag2(1.0, -1.0);
const M2 kCusp = (M2() << 0, 1, 1, kI).finished();

M2 n_theta(double theta) { return diag2(1.0, std::polar(1.0, theta)); }
M2 n_tau(double tau) { return (M2() << 0, 1, tau, 0).finished(); }
M2 n_rank_one() { return diag2(1.0, 0.0); }

// h(x,y) = x^H N y and s(x,y) = x^T P y.
cplx hform(const M2 &n, const V2 &x, const V2 &y) { return x.dot(n * y); }
cplx sform(const M2 &p, const V2 &x, const V2 &y) { return (x.transpose() * p * y)(0, 0); }

// Fix the phase of v so that its largest entry is real positive.
V2 phase_fixed(V2 v) {
  const Eigen::Index k = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
  if (std::abs(v(k)) > 0) v *= std::conj(v(k)) / std::abs(v(k));
  return v;
}

// Unit vector orthogonal to a unit vector x.
V2 perp(const V2 &x) {
  V2 y(-std::conj(x(1)), std::conj(x(0)));
  return y / y.norm();
}

double residual2(const M2 &r, const M2 *p_in, const M2 &n, const M2 *p_out, cplx c, const M2 &a) {
  double res = (c * a.adjoint() * r * a - n).norm();
  if (p_in) res += (std::conj(c) * a.transpose() * *p_in * a - *p_out).norm();
  return res;
}

struct W2 {
  cplx c = 1.0;
  M2 A = M2::Identity();
};

// Levenberg-Marquardt over the ten real parameters of (c, A), driving
// c A^H R A -> N and conj(c) A^T P A -> P_out. Used to polish closed-form
// witnesses that lost accuracy near degenerate configurations.
W2 polish(const M2 &r, const M2 *p_in, const M2 &n, const M2 *p_out, W2 w) {
  using Vec = Eigen::VectorXd;
  const int m = p_in ? 16 : 8;
  auto unpack = [](const Vec &x) {
    W2 o;
    o.c = cplx(x(0), x(1));
    for (int k = 0; k < 4; ++k) o.A(k / 2, k % 2) = cplx(x(2 + 2 * k), x(3 + 2 * k));
    return o;
  };
  auto eval = [&](const Vec &x) {
    const W2 o = unpack(x);
    Vec f(m);
    const M2 dn = o.c * o.A.adjoint() * r * o.A - n;
    for (int k = 0; k < 4; ++k) {
      f(2 * k) = dn(k / 2, k % 2).real();
      f(2 * k + 1) = dn(k / 2, k % 2).imag();
    }
    if (p_in) {
      const M2 dp = std::conj(o.c) * o.A.transpose() * *p_in * o.A - *p_out;
      for (int k = 0; k < 4; ++k) {
        f(8 + 2 * k) = dp(k / 2, k % 2).real();
        f(9 + 2 * k) = dp(k / 2, k % 2).imag();
      }
    }
    return f;
  };
  Vec x(10);
  x(0) = w.c.real();
  x(1) = w.c.imag();
  for (int k = 0; k < 4; ++k) {
    x(2 + 2 * k) = w.A(k / 2, k % 2).real();
    x(3 + 2 * k) = w.A(k / 2, k % 2).imag();
  }
  Vec f = eval(x);
  double lambda = 1e-3;
  for (int it = 0; it < 300 && f.norm() > 1e-15; ++it) {
    Eigen::MatrixXd j(m, 10);
    for (int k = 0; k < 10; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(k)));
      Vec xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      j.col(k) = (eval(xp) - eval(xm)) / (2 * h);
    }
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Vec g = j.transpose() * f;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (int k = 0; k < 10; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      const Vec step = a.ldlt().solve(-g);
      const Vec fn = eval(x + step);
      if (fn.norm() < f.norm()) {
        x += step;
        f = fn;
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return unpack(x);
}

// Result of an internal normalization step before bookkeeping.
struct Step {
  W2 w;
  M2 n;
  bool boundary = false;
};

double wrap_angle(double a) {
  while (a <= -kPi) a += 2 * kPi;
  while (a > kPi) a -= 2 * kPi;
  return a;
}

// Best lambda with R ~ lambda R^H, and the relative deviation from equality.
cplx flat_ratio(const M2 &r, double &deviation) {
  const double nr2 = r.squaredNorm();
  if (nr2 == 0) {
    deviation = 0;
    return 1.0;
  }
  const M2 rh = r.adjoint();
  const cplx lam = (rh.conjugate().cwiseProduct(r)).sum() / nr2;
  deviation = (r - lam * rh).norm() / std::sqrt(nr2);
  return lam;
}

Step flat_witness(const M2 &r, double phi) {
  const cplx rot = std::polar(1.0, phi);
  M2 h = rot * r;
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<M2> es(h);
  const auto ev = es.eigenvalues(); // ascending
  V2 v0 = phase_fixed(es.eigenvectors().col(0)), v1 = phase_fixed(es.eigenvectors().col(1));
  Step s;
  if (ev(0) > 0 || ev(1) < 0) {
    const double sgn = ev(0) > 0 ? 1.0 : -1.0;
    // Order columns so the identity maps to itself.
    if (sgn > 0) s.w.A = cols2(v0 / std::sqrt(ev(0)), v1 / std::sqrt(ev(1)));
    else s.w.A = cols2(v1 / std::sqrt(-ev(1)), v0 / std::sqrt(-ev(0)));
    s.w.c = sgn * rot;
    s.n = M2::Identity();
  } else {
    s.w.A = cols2(v1 / std::sqrt(ev(1)), v0 / std::sqrt(-ev(0)));
    s.w.c = rot;
    s.n = kHyp;
  }
  return s;
}

} // namespace

const char *rkind_name(RKind k) {
  switch (k) {
  case RKind::Theta: return "Theta";
  case RKind::Tau: return "Tau";
  case RKind::Cusp: return "Cusp";
  case RKind::RankOneHermitian: return "RankOneHermitian";
  case RKind::Zero: return "Zero";
  }
  return "?";
}

std::string rcase_label(const RCase &rc) {
  std::string s = rkind_name(rc.kind);
  if (rc.kind == RKind::Theta || rc.kind == RKind::Tau) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.12g)", rc.param);
    s += buf;
  }
  return s;
}

char det_sign_char(DetSign s) {
  switch (s) {
  case DetSign::Plus: return '+';
  case DetSign::Minus: return '-';
  case DetSign::Zero: return '0';
  }
  return '?';
}

bool prefers_negation(cplx z, double eps) {
  return z.real() < -eps || (std::abs(z.real()) <= eps && z.imag() < -eps);
}

double witness_residual(const CMat &r, const CMat &p_in, const CMat &n, const CMat &p_out,
                        cplx c, const CMat &a) {
  return dist(star_congruence(c, a, r), n) + dist(sym_congruence(std::conj(c), a, p_in), p_out);
}

std::optional<double> is_quadratically_flat(const CMat &r) {
  if (!r.square()) throw Error(ErrorCode::DimensionMismatch, "flatness needs a square matrix");
  const double nr = r.norm();
  if (nr == 0) return 0.0;
  const CMat rh = r.adjoint();
  cplx num = 0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) num += std::conj(rh(i, j)) * r(i, j);
  const cplx lam = num / (nr * nr);
  // R = lam R^H with |lam| = 1 means exp(i phi) R is Hermitian for lam = exp(-2 i phi).
  if (dist(r, lam * rh) > r.tol() * nr) return std::nullopt;
  double phi = -std::arg(lam) / 2.0;
  phi = std::fmod(phi, kPi);
  if (phi < 0) phi += kPi;
  if (kPi - phi <= 1e-15) phi = 0.0;
  if (!(std::polar(1.0, phi) * r).is_hermitian()) return std::nullopt;
  return phi;
}

RClass classify_R(const CMat &rin) {
  const M2 r = to2(rin);
  const double nr = r.norm();
  RClass out;
  Step st;
  auto finish = [&](RCase rc, const Step &s) {
    W2 w = s.w;
    double res = residual2(r, nullptr, s.n, nullptr, w.c, w.A);
    if (res > 1e-12 * (1.0 + nr)) {
      const W2 pw = polish(r, nullptr, s.n, nullptr, w);
      const double pres = residual2(r, nullptr, s.n, nullptr, pw.c, pw.A);
      if (pres < res) {
        w = pw;
        res = pres;
      }
    }
    out.rcase = rc;
    out.N = from2(s.n);
    out.witness = Witness{w.c, from2(w.A), res};
    out.boundary = s.boundary;
    if (res > accept_bound(nr, 0.0))
      throw Error(ErrorCode::WitnessNotConverged,
                  "case " + rcase_label(rc) + " identified but the witness residual is " +
                      std::to_string(res));
    return out;
  };

  const int rk = rank(rin);
  if (rk == 0) {
    st.n = M2::Zero();
    return finish({RKind::Zero, 0.0}, st);
  }
  if (rk == 1) {
    Eigen::JacobiSVD<M2> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const V2 u = phase_fixed(svd.matrixU().col(0));
    const V2 v = svd.matrixV().col(0);
    const double overlap = std::abs(v.dot(u));
    if (overlap >= 1.0 - rin.tol()) {
      st.w.A = cols2(u, perp(u));
      st.w.c = 1.0 / hform(r, u, u);
      st.n = n_rank_one();
      st.boundary = 1.0 - overlap > 1e-12;
      return finish({RKind::RankOneHermitian, 0.0}, st);
    }
    // R = sigma u v^H: a null vector of R and a null vector of R^H give the
    // nilpotent form [[0,1],[0,0]].
    const V2 a1 = phase_fixed(svd.matrixV().col(1));
    const V2 a2 = phase_fixed(svd.matrixU().col(1));
    st.w.A = cols2(a1, a2);
    st.w.c = 1.0 / hform(r, a1, a2);
    st.n = n_tau(0.0);
    return finish({RKind::Tau, 0.0}, st);
  }

  if (auto phi = is_quadratically_flat(rin)) {
    st = flat_witness(r, *phi);
    return finish({RKind::Theta, st.n == M2::Identity() ? 0.0 : kPi}, st);
  }

  // The *-cosquare C = R^{-H} R transforms as C -> (c/conj c) A^{-1} C A, so
  // its eigenvalue ratio and Jordan structure are invariants.
  const M2 cosq = r.adjoint().inverse() * r;
  const cplx half_tr = cosq.trace() / 2.0;
  const double nonscalar = (cosq - half_tr * M2::Identity()).norm() / cosq.norm();
  if (nonscalar <= rin.tol()) {
    // Within tolerance of a Hermitian multiple: snap to the flat case.
    double dev = 0;
    const cplx lam = flat_ratio(r, dev);
    double phi = std::fmod(-std::arg(lam) / 2.0, kPi);
    if (phi < 0) phi += kPi;
    st = flat_witness(r, phi);
    st.boundary = true;
    return finish({RKind::Theta, st.n == M2::Identity() ? 0.0 : kPi}, st);
  }
  Eigen::ComplexEigenSolver<M2> es(cosq);
  const cplx l0 = es.eigenvalues()(0), l1 = es.eigenvalues()(1);
  // The discriminant is linear in rounding errors of C while the eigenvalue
  // gap of a perturbed Jordan block grows like its square root.
  const cplx tr = cosq.trace();
  const double rel_disc = std::abs(tr * tr - 4.0 * cosq.determinant()) / std::norm(tr);

  if (rel_disc <= 1e-9) {
    // Non-diagonalizable cosquare: the cusp class [[0,1],[1,i]].
    const M2 nil = cosq - half_tr * M2::Identity();
    const Eigen::Index col = nil.col(0).norm() >= nil.col(1).norm() ? 0 : 1;
    const V2 x1 = phase_fixed(nil.col(col) / nil.col(col).norm());
    const V2 x2 = perp(x1);
    const cplx m = hform(r, x1, x2), n = hform(r, x2, x1), p = hform(r, x2, x2);
    cplx delta = std::sqrt(n / m);
    delta /= std::abs(delta);
    cplx c = 1.0 / (m * delta);
    cplx q = c * p;
    if (q.imag() < 0) {
      delta = -delta;
      c = -c;
      q = -q;
    }
    if (q.imag() <= 0) throw Error(ErrorCode::WitnessNotConverged, "degenerate cusp normalization");
    const double s = 1.0 / std::sqrt(q.imag());
    const double beta = -(s * s * q).real() / 2.0;
    st.w.A = cols2(x1 / s, s * delta * x2 + beta * x1 / s);
    st.w.c = c;
    st.n = kCusp;
    return finish({RKind::Cusp, 0.0}, st);
  }

  const cplx ratio = l1 / l0;
  if (std::abs(std::abs(ratio) - 1.0) <= 1e-6) {
    // Unimodular eigenvalue ratio: N = diag(1, exp(i theta)).
    V2 x0 = phase_fixed(es.eigenvectors().col(0).normalized());
    V2 x1 = phase_fixed(es.eigenvectors().col(1).normalized());
    cplx d0 = hform(r, x0, x0), d1 = hform(r, x1, x1);
    x0 /= std::sqrt(std::abs(d0));
    x1 /= std::sqrt(std::abs(d1));
    double theta = wrap_angle(std::arg(d1) - std::arg(d0));
    if (theta < 0) {
      std::swap(x0, x1);
      std::swap(d0, d1);
      theta = -theta;
    }
    st.w.A = cols2(x0, x1);
    st.w.c = std::polar(1.0, -std::arg(d0));
    st.n = n_theta(theta);
    return finish({RKind::Theta, theta}, st);
  }

  // Eigenvalues with moduli tau^2 * |l| and |l|: N = [[0,1],[tau,0]].
  Eigen::Index small = std::abs(l0) < std::abs(l1) ? 0 : 1;
  const V2 x1 = phase_fixed(es.eigenvectors().col(small).normalized());
  const V2 x2 = phase_fixed(es.eigenvectors().col(1 - small).normalized());
  const cplx m = hform(r, x1, x2), n = hform(r, x2, x1);
  const cplx s2 = std::polar(1.0, std::arg(n / m) / 2.0);
  const double tau = std::abs(n) / std::abs(m);
  st.w.A = cols2(x1, s2 * x2);
  st.w.c = 1.0 / (s2 * m);
  st.n = n_tau(tau);
  if (tau >= 1.0 - rin.tol()) {
    // Boundary tau -> 1 is the indefinite flat class.
    double dev = 0;
    const cplx lam = flat_ratio(r, dev);
    double phi = std::fmod(-std::arg(lam) / 2.0, kPi);
    if (phi < 0) phi += kPi;
    st = flat_witness(r, phi);
    st.boundary = true;
    return finish({RKind::Theta, kPi}, st);
  }
  return finish({RKind::Tau, tau}, st);
}

// ---------------------------------------------------------------------------
// P normalization under the stabilizer of N.

namespace {

struct PStep {
  W2 w;
  M2 n;
  M2 p;
  std::string shape;
  std::vector<Modulus> moduli;
  bool boundary = false;
};

struct Snapper {
  double ztol;
  bool boundary = false;
  bool zero(cplx z) {
    const double a = std::abs(z);
    if (a > ztol) return false;
    if (a > 1e-3 * ztol) boundary = true;
    return true;
  }
  // Snap nonnegative reals sitting at the 0/1 case boundaries.
  double unit(double v) {
    for (double t : {0.0, 1.0}) {
      const double d = std::abs(v - t);
      if (d <= 1e-10) {
        if (d > 1e-13) boundary = true;
        return t;
      }
    }
    return v;
  }
};

cplx unit_phase(cplx z) { return std::abs(z) > 0 ? z / std::abs(z) : cplx(1.0); }

PStep theta_generic(double theta, const M2 &p, Snapper &sn) {
  const cplx a = p(0, 0), b = p(0, 1), d = p(1, 1);
  const bool za = sn.zero(a), zb = sn.zero(b), zd = sn.zero(d);
  cplx al = 1.0, de = 1.0;
  PStep s;
  if (!za) al = std::polar(1.0, -std::arg(a) / 2.0);
  if (!zd) de = std::polar(1.0, -std::arg(d) / 2.0);
  if (za && !zb) al = std::conj(unit_phase(b * de));
  if (!za && zd && !zb) de = std::conj(unit_phase(b * al));
  cplx bb = zb ? cplx(0) : b * al * de;
  if (!za && !zd && prefers_negation(bb)) {
    de = -de;
    bb = -bb;
  }
  s.w.A = diag2(al, de);
  s.n = n_theta(theta);
  const double av = za ? 0.0 : std::abs(a), dv = zd ? 0.0 : std::abs(d);
  if (za) {
    const double bv = zb ? 0.0 : std::abs(b);
    s.p << 0, bv, bv, dv;
    s.shape = "[[0,b],[b,d]]";
    s.moduli = {{"theta", theta}, {"b", bv}, {"d", dv}};
  } else if (zd) {
    const double bv = zb ? 0.0 : std::abs(b);
    s.p << av, bv, bv, 0;
    s.shape = "[[a,b],[b,0]]";
    s.moduli = {{"theta", theta}, {"a", av}, {"b", bv}};
  } else {
    s.p << av, bb, bb, dv;
    s.shape = "[[a,b],[b,d]]";
    s.moduli = {{"theta", theta}, {"a", av}, {"b", bb, 2}, {"d", dv}};
  }
  return s;
}

PStep theta_definite(const M2 &p, Snapper &sn) {
  const TakagiFactors t = takagi(from2(p));
  const M2 w = to2(t.U);
  PStep s;
  s.w.A = w.conjugate() * kSwap; // ascending order a <= d
  const double a = sn.unit(t.D(1, 1).real()), d = sn.unit(t.D(0, 0).real());
  s.n = M2::Identity();
  s.p = diag2(a, d);
  s.shape = "[[a,0],[0,d]]";
  s.moduli = {{"a", a}, {"d", d}};
  return s;
}

} // namespace

HermPairForm hermitian_pair_normalize(const CMat &nh_in, const CMat &b_in) {
  const M2 nh = to2(nh_in), b = to2(b_in);
  const double scale_n = std::max(nh.norm(), 1e-300);
  if ((nh - nh.adjoint()).norm() > nh_in.tol() * scale_n)
    throw Error(ErrorCode::NotHermitian, "first matrix of the pair is not Hermitian");
  if ((b - b.adjoint()).norm() > b_in.tol() * std::max(b.norm(), 1e-300))
    throw Error(ErrorCode::NotHermitian, "second matrix of the pair is not Hermitian");
  const Signature sig = hermitian_signature(nh_in);
  if (sig.p != 1 || sig.q != 1)
    throw Error(ErrorCode::NCongruenceFailed, "first matrix is not congruent to diag(1,-1)");

  HermPairForm out;
  const M2 m = nh.inverse() * b;
  const double scale = std::max(m.norm(), 1e-300);
  if (b.norm() == 0.0) {
    out.kind = HermPairForm::Kind::DiagDiag;
    return out;
  }
  const cplx tr = m.trace(), det = m.determinant();
  const double disc = (tr * tr - 4.0 * det).real();
  const double dtol = 1e-9 * scale * scale;
  if (disc < -dtol) {
    // Complex pair x -+ iy: OffXY with y > 0.
    out.kind = HermPairForm::Kind::OffXY;
    out.x = tr.real() / 2.0;
    out.y = std::sqrt(-disc) / 2.0;
    return out;
  }
  if (disc > dtol) {
    Eigen::ComplexEigenSolver<M2> es(m);
    double k_pos = 0, k_neg = 0;
    for (int j = 0; j < 2; ++j) {
      const V2 x = es.eigenvectors().col(j);
      const double hx = hform(nh, x, x).real();
      const double bx = hform(b, x, x).real();
      if (hx > 0) k_pos = bx / hx;
      else k_neg = -bx / hx;
    }
    out.kind = HermPairForm::Kind::DiagDiag;
    out.k1 = k_pos;
    out.k2 = k_neg;
    return out;
  }
  const double mu = tr.real() / 2.0;
  const M2 nil = m - mu * M2::Identity();
  if (nil.norm() <= 1e-7 * scale) {
    // Scalar N^{-1}B = mu I means B = mu N = diag(mu, -mu) after congruence.
    out.kind = HermPairForm::Kind::DiagDiag;
    out.k1 = mu;
    out.k2 = -mu;
    return out;
  }
  // Jordan block: x spans the range of (M - mu), y solves (M - mu) y = x.
  const Eigen::Index col = nil.col(0).norm() >= nil.col(1).norm() ? 0 : 1;
  const V2 x = nil.col(col);
  V2 y = V2::Zero();
  y(col) = 1.0;
  out.kind = HermPairForm::Kind::OffK;
  out.k = mu;
  out.eps = hform(nh, x, y).real() > 0 ? 1 : -1;
  return out;
}

namespace {

// Indefinite flat case N = diag(1,-1). M = N conj(P) N P transforms by
// similarity; T x = N conj(P) conj(x) is antilinear with T^2 = M and
// h(Tx, y) = s(x, y). Its eigenstructure selects the sub-case.
PStep theta_indefinite(const M2 &p, Snapper &sn, double tol) {
  const M2 &n = kHyp;
  auto T = [&](const V2 &x) -> V2 { return n * p.conjugate() * x.conjugate(); };
  PStep s;
  s.n = n;
  const double pn = p.norm();
  const M2 mm = n * p.conjugate() * n * p;
  HermPairForm hp;
  const bool nilpotent = mm.norm() <= 1e-9 * pn * pn;
  if (!nilpotent) hp = hermitian_pair_normalize(from2(n), from2(p.adjoint() * n * p));

  if (nilpotent) {
    CMat pc = from2(p);
    pc.set_tol(tol);
    if (pn == 0.0 || rank(pc) == 0) {
      s.p = M2::Zero();
      s.shape = "[[a,0],[0,d]]";
      s.moduli = {{"a", 0.0}, {"d", 0.0}};
      return s;
    }
    // P = u u^T with u isotropic: target [[1,1],[1,1]].
    const TakagiFactors tk = takagi(pc);
    V2 u(tk.U(0, 0), tk.U(1, 0));
    u *= std::sqrt(tk.D(0, 0).real());
    const V2 k(u(1), -u(0));
    V2 pv(1.0, u(0) / u(1));
    pv /= u(0);
    const V2 q = (2.0 / hform(n, pv, k)) * k;
    s.w.A = cols2((pv + q) / 2.0, (pv - q) / 2.0);
    s.p << 1, 1, 1, 1;
    s.shape = "[[1,1],[1,1]]";
    s.moduli = {};
    return s;
  }

  if (hp.kind == HermPairForm::Kind::DiagDiag && hp.k1 == -hp.k2) {
    const double mu = hp.k1;
    if (mu > 0) {
      // Scalar M = mu I: the fixed set of T / sqrt(mu) is a real plane on
      // which h is real of signature (1,1); diagonalize h there.
      const double r = std::sqrt(mu);
      std::vector<V2> cand;
      for (int e = 0; e < 2; ++e)
        for (cplx ph : {cplx(1.0), kI}) {
          V2 x = V2::Zero();
          x(e) = ph;
          V2 y = T(x) + r * x;
          if (y.norm() > 1e-6 * (1 + r)) cand.push_back(y / y.norm());
        }
      V2 best_pos = V2::Zero();
      double best = 0;
      for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i; j < cand.size(); ++j)
          for (double sg : {1.0, -1.0}) {
            V2 v = i == j ? cand[i] : V2(cand[i] + sg * cand[j]);
            const double hv = hform(n, v, v).real() / std::max(v.squaredNorm(), 1e-300);
            if (hv > best) {
              best = hv;
              best_pos = v;
            }
          }
      V2 y1 = best_pos / std::sqrt(hform(n, best_pos, best_pos).real());
      V2 y2 = V2::Zero();
      double bestneg = 0;
      for (const V2 &c : cand) {
        V2 w = c - hform(n, y1, c).real() * y1;
        const double hw = hform(n, w, w).real();
        if (w.norm() > 1e-6 && hw / w.squaredNorm() < bestneg) {
          bestneg = hw / w.squaredNorm();
          y2 = w / std::sqrt(-hw);
        }
      }
      s.w.A = cols2(y1, kI * y2);
      const double v = sn.unit(r);
      s.p = diag2(v, v);
      s.shape = "[[a,0],[0,d]]";
      s.moduli = {{"a", v}, {"d", v}};
      return s;
    }
    // Scalar M = -beta^2 I: pick an h-positive isotropic vector of s.
    const double beta = std::sqrt(-mu);
    const cplx p11 = p(0, 0), p12 = p(0, 1), p22 = p(1, 1);
    cplx w;
    if (std::abs(p22) <= 1e-14 * pn) {
      w = -p11 / (2.0 * p12);
    } else {
      const cplx disc = std::sqrt(p12 * p12 - p11 * p22);
      const cplx w1 = (-p12 + disc) / p22, w2 = (-p12 - disc) / p22;
      w = std::abs(w1) < std::abs(w2) ? w1 : w2;
    }
    const V2 x1 = V2(1.0, w) / std::sqrt(std::max(1.0 - std::norm(w), 1e-300));
    const V2 x2 = -T(x1) / beta;
    s.w.A = cols2(x1, x2);
    const double bv = sn.unit(beta);
    s.p << 0, bv, bv, 0;
    s.shape = "[[0,b],[b,0]]";
    s.moduli = {{"b", bv}};
    return s;
  }

  if (hp.kind == HermPairForm::Kind::DiagDiag) {
    // Distinct real eigenvalues mu+ (h-positive) and mu- (h-negative), both >= 0.
    const M2 m = n * p.conjugate() * n * p;
    Eigen::ComplexEigenSolver<M2> es(m);
    V2 xp = V2::Zero(), xm = V2::Zero();
    double mup = 0, mum = 0;
    for (int j = 0; j < 2; ++j) {
      V2 x = es.eigenvectors().col(j).normalized();
      const cplx lam = x.dot(T(x));
      if (std::abs(lam) > 1e-14 * (1 + pn)) x *= std::polar(1.0, std::arg(lam) / 2.0);
      const double hx = hform(n, x, x).real();
      x /= std::sqrt(std::abs(hx));
      // |s(x,x)| equals the square root of the eigenvalue but is linear in P,
      // so a zero root stays at rounding level.
      const double sx = std::abs(sform(p, x, x));
      const double root = sn.zero(sx) ? 0.0 : sx;
      if (hx > 0) {
        xp = x;
        mup = root;
      } else {
        xm = x;
        mum = root;
      }
    }
    const double a = sn.unit(std::min(mup, mum)), d = sn.unit(std::max(mup, mum));
    if (mup <= mum) {
      s.w.A = cols2(xp, kI * xm);
    } else {
      s.w.A = cols2(kI * xm, kI * xp);
      s.w.c = -1.0;
    }
    s.p = diag2(a, d);
    s.shape = "[[a,0],[0,d]]";
    s.moduli = {{"a", a}, {"d", d}};
    return s;
  }

  s.n = kSwap;
  if (hp.kind == HermPairForm::Kind::OffK) {
    // Jordan block with eigenvalue b^2 > 0: target ([[0,1],[1,0]], [[0,b],[b,1]]).
    const double bb = std::sqrt(std::max(hp.k, 0.0));
    const M2 m = n * p.conjugate() * n * p;
    const M2 nil = m - hp.k * M2::Identity();
    const Eigen::Index col = nil.col(0).norm() >= nil.col(1).norm() ? 0 : 1;
    V2 x1 = nil.col(col).normalized();
    const cplx lam = x1.dot(T(x1));
    x1 *= std::polar(1.0, std::arg(lam) / 2.0);
    const V2 y0 = n * x1 / x1.squaredNorm();
    const cplx s00 = sform(p, y0, y0);
    const cplx t(-hform(n, y0, y0).real() / 2.0, -s00.imag() / (2.0 * bb));
    const V2 x2 = y0 + t * x1;
    const double rho = s00.real() + 2.0 * bb * t.real();
    s.w.A = cols2(rho * x1, x2);
    s.w.c = 1.0 / rho;
    const double bv = sn.unit(bb);
    s.p << 0, bv, bv, 1;
    s.shape = "[[0,b],[b,1]]";
    s.moduli = {{"b", bv}};
    return s;
  }

  // Complex eigenvalues d, conj(d) with Im d > 0: target (N', diag(1, d)).
  const M2 m = n * p.conjugate() * n * p;
  Eigen::ComplexEigenSolver<M2> es(m);
  const Eigen::Index up = es.eigenvalues()(0).imag() > 0 ? 0 : 1;
  const cplx dval = es.eigenvalues()(up);
  const V2 x1 = es.eigenvectors().col(1 - up).normalized();
  const V2 x2 = es.eigenvectors().col(up).normalized();
  const cplx s11 = sform(p, x1, x1), s22 = sform(p, x2, x2), h12 = hform(n, x1, x2);
  double best = 1e300;
  for (double eps : {1.0, -1.0}) {
    const cplx sig1 = std::sqrt(1.0 / (eps * s11));
    for (double sg : {1.0, -1.0}) {
      const cplx sig2 = sg * std::sqrt(dval / (eps * s22));
      const double err = std::abs(eps * std::conj(sig1) * sig2 * h12 - 1.0);
      if (err < best) {
        best = err;
        s.w.A = cols2(sig1 * x1, sig2 * x2);
        s.w.c = eps;
      }
    }
  }
  s.p = diag2(1.0, dval);
  s.shape = "[[1,0],[0,d]]";
  s.moduli = {{"d", dval, 2}};
  return s;
}

PStep tau_generic(double tau, const M2 &p, Snapper &sn) {
  const cplx a = p(0, 0), b = p(0, 1), d = p(1, 1);
  const bool za = sn.zero(a), zb = sn.zero(b), zd = sn.zero(d);
  // Stabilizer: A = diag(e^{i phi}, s e^{i phi}), c = 1/s, acting as
  // P -> e^{2 i phi} [[a k, b], [b, d / k]] with k = 1/s real nonzero.
  cplx rot = 1.0;
  double k = 1.0;
  PStep s;
  s.n = n_tau(tau);
  if (!zb) {
    rot = std::conj(unit_phase(b));
    const double bv = std::abs(b);
    if (!za) {
      k = 1.0 / std::abs(a);
      cplx an = rot * a * k;
      if (prefers_negation(an)) k = -k;
      an = rot * a * k;
      const cplx dn = rot * d / k;
      s.p << an, bv, bv, dn;
      s.shape = "[[a,b],[b,d]]";
      s.moduli = {{"tau", tau}, {"a", an}, {"b", bv}, {"d", dn, 2}};
    } else if (!zd) {
      k = std::abs(d);
      cplx dn = rot * d / k;
      if (prefers_negation(dn)) k = -k;
      dn = rot * d / k;
      s.p << 0, bv, bv, dn;
      s.shape = "[[0,b],[b,d]]";
      s.moduli = {{"tau", tau}, {"b", bv}, {"d", dn}};
    } else {
      s.p << 0, bv, bv, 0;
      s.shape = "[[0,b],[b,0]]";
      s.moduli = {{"tau", tau}, {"b", bv}};
    }
  } else if (!za) {
    k = 1.0 / std::abs(a);
    rot = std::conj(unit_phase(a));
    const cplx dn = std::conj(a) * d;
    s.p << 1, 0, 0, (zd ? cplx(0) : dn);
    s.shape = "[[1,0],[0,d]]";
    s.moduli = {{"tau", tau}, {"d", zd ? cplx(0) : dn, 2}};
  } else if (!zd) {
    k = std::abs(d);
    rot = std::conj(unit_phase(d));
    s.p << 0, 0, 0, 1;
    s.shape = "[[0,0],[0,1]]";
    s.moduli = {{"tau", tau}};
  } else {
    s.p = M2::Zero();
    s.shape = "[[0,0],[0,0]]";
    s.moduli = {{"tau", tau}};
  }
  const cplx ph = std::polar(1.0, std::arg(rot) / 2.0);
  const double sc = 1.0 / k;
  s.w.A = diag2(ph, sc * ph);
  s.w.c = 1.0 / sc;
  return s;
}

PStep tau_zero(const M2 &p, Snapper &sn) {
  const cplx a = p(0, 0), b = p(0, 1), d = p(1, 1);
  const bool za = sn.zero(a), zb = sn.zero(b), zd = sn.zero(d);
  // A = diag(alpha, delta), c = 1/(conj(alpha) delta):
  // P -> [[a alpha / conj(delta), b delta / conj(delta)], [., d delta^2 / (alpha conj(delta))]].
  cplx al = 1.0, de = 1.0;
  PStep s;
  s.n = n_tau(0.0);
  if (!zb) {
    de = std::polar(1.0, -std::arg(b) / 2.0);
    const double bv = std::abs(b);
    if (!zd) {
      al = d * de * de / std::conj(de);
      const cplx an = za ? cplx(0) : a * al / std::conj(de);
      s.p << an, bv, bv, 1;
      s.shape = "[[a,b],[b,1]]";
      s.moduli = {{"a", an, 2}, {"b", bv}};
    } else if (!za) {
      al = std::conj(de) / a;
      s.p << 1, bv, bv, 0;
      s.shape = "[[1,b],[b,0]]";
      s.moduli = {{"b", bv}};
    } else {
      s.p << 0, bv, bv, 0;
      s.shape = "[[0,b],[b,0]]";
      s.moduli = {{"b", bv}};
    }
  } else if (!zd) {
    if (!za) de = std::polar(1.0, -std::arg(a * d) / 4.0);
    al = d * de * de / std::conj(de);
    const double av = za ? 0.0 : sn.unit(std::abs(a * d));
    s.p << av, 0, 0, 1;
    s.shape = "[[a,0],[0,1]]";
    s.moduli = {{"a", av}};
  } else if (!za) {
    al = 1.0 / a;
    s.p << 1, 0, 0, 0;
    s.shape = "[[1,0],[0,0]]";
  } else {
    s.p = M2::Zero();
    s.shape = "[[0,0],[0,0]]";
  }
  s.w.A = diag2(al, de);
  s.w.c = 1.0 / (std::conj(al) * de);
  return s;
}

PStep cusp(const M2 &p, Snapper &sn) {
  const cplx a = p(0, 0), b = p(0, 1), d = p(1, 1);
  const bool za = sn.zero(a), zb = sn.zero(b), zd = sn.zero(d);
  // Stabilizer A = e^{i phi} [[1, i t], [0, 1]], c = 1:
  // P -> e^{2 i phi} [[a, b + i t a], [., d + 2 i t b - t^2 a]].
  double t = 0.0;
  cplx rot = 1.0;
  PStep s;
  s.n = kCusp;
  if (!za) {
    t = -(b / a).imag();
    rot = std::conj(unit_phase(a));
    const double av = std::abs(a);
    double bv = av * (b / a).real();
    const cplx dv = rot * (d + 2.0 * kI * t * b - t * t * a);
    if (sn.zero(bv)) {
      s.p << av, 0, 0, dv;
      s.shape = "[[a,0],[0,d]]";
      s.moduli = {{"a", av}, {"d", dv, 2}};
    } else {
      s.p << av, bv, bv, dv;
      s.shape = "[[a,b],[b,d]]";
      s.moduli = {{"a", av}, {"b", bv}, {"d", dv, 2}};
    }
  } else if (!zb) {
    t = -(d / b).imag() / 2.0;
    rot = std::conj(unit_phase(b));
    const double bv = std::abs(b);
    double dv = bv * (d / b).real();
    if (sn.zero(dv)) {
      s.p << 0, bv, bv, 0;
      s.shape = "[[0,b],[b,0]]";
      s.moduli = {{"b", bv}};
    } else {
      s.p << 0, bv, bv, dv;
      s.shape = "[[0,b],[b,d]]";
      s.moduli = {{"b", bv}, {"d", dv}};
    }
  } else if (!zd) {
    rot = std::conj(unit_phase(d));
    const double dv = std::abs(d);
    s.p << 0, 0, 0, dv;
    s.shape = "[[0,0],[0,d]]";
    s.moduli = {{"d", dv}};
  } else {
    s.p = M2::Zero();
    s.shape = "[[0,0],[0,0]]";
  }
  const cplx ph = std::polar(1.0, std::arg(rot) / 2.0);
  s.w.A = ph * (M2() << 1, kI * t, 0, 1).finished();
  return s;
}

PStep rank_one(const M2 &p, Snapper &sn) {
  const cplx a = p(0, 0), b = p(0, 1), d = p(1, 1);
  const bool zb = sn.zero(b), zd = sn.zero(d);
  // A = [[alpha, 0], [gamma, delta]], c = 1/|alpha|^2.
  cplx al = 1.0, ga = 0.0, de = 1.0;
  PStep s;
  s.n = n_rank_one();
  if (!zd) {
    const cplx red = a - b * b / d;
    const bool zr = sn.zero(red);
    if (!zr) al = std::polar(1.0, -std::arg(red) / 2.0);
    ga = -b * al / d;
    de = 1.0 / std::sqrt(d);
    const double av = zr ? 0.0 : sn.unit(std::abs(red));
    s.p << av, 0, 0, 1;
    s.shape = "[[a,0],[0,1]]";
    s.moduli = {{"a", av}};
  } else if (!zb) {
    ga = -a / (2.0 * b);
    de = 1.0 / b;
    s.p << 0, 1, 1, 0;
    s.shape = "[[0,1],[1,0]]";
  } else {
    const bool za = sn.zero(a);
    if (!za) al = std::polar(1.0, -std::arg(a) / 2.0);
    const double av = za ? 0.0 : sn.unit(std::abs(a));
    s.p << av, 0, 0, 0;
    s.shape = "[[a,0],[0,0]]";
    s.moduli = {{"a", av}};
  }
  s.w.A = (M2() << al, 0, ga, de).finished();
  s.w.c = 1.0 / std::norm(al);
  return s;
}

PStep zero_case(const M2 &p, Snapper &, double tol) {
  CMat pc = from2(p);
  pc.set_tol(tol);
  PStep s;
  s.n = M2::Zero();
  if (p.norm() == 0.0) {
    s.p = M2::Zero();
    s.shape = "[[0,0],[0,0]]";
    return s;
  }
  const TakagiFactors t = takagi(pc);
  const int rk = rank(pc);
  const cplx s0 = rk >= 1 ? 1.0 / std::sqrt(t.D(0, 0).real()) : 1.0;
  const cplx s1 = rk >= 2 ? 1.0 / std::sqrt(t.D(1, 1).real()) : 1.0;
  s.w.A = to2(t.U).conjugate() * diag2(s0, s1);
  if (rk == 2) {
    s.p = M2::Identity();
    s.shape = "[[1,0],[0,1]]";
  } else if (rk == 1) {
    s.p = diag2(1.0, 0.0);
    s.shape = "[[1,0],[0,0]]";
  } else {
    s.p = M2::Zero();
    s.shape = "[[0,0],[0,0]]";
    s.w.A = M2::Identity();
  }
  return s;
}

} // namespace

PNormal normalize_P(const RCase &rc, const CMat &n_in, const CMat &p_in) {
  const M2 n = to2(n_in), p = to2(p_in);
  const double np = p.norm();
  if ((p - p.transpose()).norm() > p_in.tol() * std::max(np, 1e-300))
    throw Error(ErrorCode::NotSymmetric, "P is not symmetric within tolerance");
  Snapper sn{1e-9 * std::max(1.0, np)};
  PStep s;
  switch (rc.kind) {
  case RKind::Theta:
    if (rc.param == 0.0) s = theta_definite(p, sn);
    else if (rc.param == kPi) s = theta_indefinite(p, sn, p_in.tol());
    else s = theta_generic(rc.param, p, sn);
    break;
  case RKind::Tau:
    s = rc.param == 0.0 ? tau_zero(p, sn) : tau_generic(rc.param, p, sn);
    break;
  case RKind::Cusp: s = cusp(p, sn); break;
  case RKind::RankOneHermitian: s = rank_one(p, sn); break;
  case RKind::Zero: s = zero_case(p, sn, p_in.tol()); break;
  }
  double res = residual2(n, &p, s.n, &s.p, s.w.c, s.w.A);
  if (res > 1e-12 * (1.0 + n.norm() + np)) {
    const W2 pw = polish(n, &p, s.n, &s.p, s.w);
    const double pres = residual2(n, &p, s.n, &s.p, pw.c, pw.A);
    if (pres < res) {
      s.w = pw;
      res = pres;
    }
  }
  if (res > accept_bound(n.norm(), np))
    throw Error(ErrorCode::StabilizerSolveFailed,
                "normalization of P for case " + rcase_label(rc) + " left residual " +
                    std::to_string(res));
  PNormal out;
  out.P = from2(s.p);
  out.N = from2(s.n);
  out.shape = s.shape;
  out.moduli = s.moduli;
  out.witness = Witness{s.w.c, from2(s.w.A), res};
  out.boundary = sn.boundary || s.boundary;
  return out;
}

FlatInvariants flat_invariants(const CMat &r, const CMat &p) {
  if (!r.is_hermitian()) throw Error(ErrorCode::NotHermitian, "R is not Hermitian");
  if (!p.is_symmetric()) throw Error(ErrorCode::NotSymmetric, "P is not symmetric");
  const Signature sig = hermitian_signature(build_gamma(r, p));
  return {sig.rank, std::abs(sig.p - sig.q)};
}

TableRow classify_pair(const CMat &r, const CMat &s) {
  const M2 rm = to2(r), sm = to2(s);
  if ((sm - sm.transpose()).norm() > s.tol() * std::max(sm.norm(), 1e-300))
    throw Error(ErrorCode::NotSymmetric, "S is not symmetric within tolerance");
  const M2 p_in = 2.0 * sm.conjugate();
  const RClass rcl = classify_R(r);
  const M2 a0 = to2(rcl.witness.A);
  const cplx c0 = rcl.witness.c;
  M2 p1 = std::conj(c0) * a0.transpose() * p_in * a0;
  p1 = (0.5 * (p1 + p1.transpose())).eval();
  CMat p1c = from2(p1);
  p1c.set_tol(s.tol());
  const PNormal pn = normalize_P(rcl.rcase, rcl.N, p1c);

  TableRow row;
  row.r_case = rcl.rcase;
  row.N = pn.N;
  row.P = pn.P;
  row.shape = pn.shape;
  row.moduli = pn.moduli;
  row.boundary = rcl.boundary || pn.boundary;

  W2 w{c0 * pn.witness.c, a0 * to2(pn.witness.A)};
  const M2 nt = to2(row.N), pt = to2(row.P);
  double res = residual2(rm, &p_in, nt, &pt, w.c, w.A);
  const double bound = accept_bound(rm.norm(), p_in.norm());
  if (res > 1e-12 * (1.0 + rm.norm() + p_in.norm())) {
    const W2 pw = polish(rm, &p_in, nt, &pt, w);
    const double pres = residual2(rm, &p_in, nt, &pt, pw.c, pw.A);
    if (pres < res) {
      w = pw;
      res = pres;
    }
  }
  if (res > bound)
    throw Error(ErrorCode::WitnessNotConverged,
                "composite witness residual " + std::to_string(res) + " for case " +
                    rcase_label(rcl.rcase));
  row.witness = Witness{w.c, from2(w.A), res};

  const double tol = r.tol();
  CMat nn = row.N, pp = row.P;
  nn.set_tol(tol);
  pp.set_tol(tol);
  row.rho_N = rank(nn);
  if (nn.is_hermitian()) {
    const Signature sg = hermitian_signature(nn);
    row.sigma_N = std::abs(sg.p - sg.q);
  }
  row.rho_P = rank(pp);
  CMat np(2, 4, tol);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      np(i, j) = nn(i, j);
      np(i, j + 2) = pp(i, j);
    }
  row.rho_NP = rank(np);
  const CMat g = build_gamma(nn, pp);
  row.rho_Gamma = rank(g);
  if (nn.is_hermitian()) {
    const Signature sg = hermitian_signature(g);
    row.sigma_Gamma = std::abs(sg.p - sg.q);
  }
  if (row.rho_Gamma < 4) {
    row.det_sign = DetSign::Zero;
  } else {
    const double d = g.det().real();
    row.det_sign = d > 0 ? DetSign::Plus : DetSign::Minus;
  }
  return row;
}

const char *quadric_name(Quadric q) {
  switch (q) {
  case Quadric::W1sqW2sq: return "w1^2+w2^2";
  case Quadric::Z2W2W1sq: return "z2w2+w1^2";
  case Quadric::W1sq: return "w1^2";
  case Quadric::Z1W1Z2W2: return "z1w1+z2w2";
  case Quadric::Z1W1: return "z1w1";
  case Quadric::Zero: return "0";
  }
  return "?";
}

Quadric complexification_class(const CMat &r, const CMat &s) {
  to2(r); // dimension checks only
  to2(s);
  const int rs = rank(s);
  CMat rsm(2, 4, r.tol());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      rsm(i, j) = r(i, j);
      rsm(i, j + 2) = s(i, j);
    }
  const int rrs = rank(rsm);
  if (rs == 2) return Quadric::W1sqW2sq;
  if (rs == 1) return rrs == 2 ? Quadric::Z2W2W1sq : Quadric::W1sq;
  if (rrs == 2) return Quadric::Z1W1Z2W2;
  if (rrs == 1) return Quadric::Z1W1;
  return Quadric::Zero;
}

} // namespace crsing
