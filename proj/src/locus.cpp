#include "crsing/locus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace crsing {

namespace {

// Dense truncated Taylor arithmetic in the four independent variables
// (w1, w2, conj w1, conj w2). Monomials are keyed exactly like PSeries terms.
struct JetSpace {
  int order = 0;
  std::vector<Exps> mono;
  std::map<Exps, int> index;
  std::vector<std::array<int, 3>> mul; // (i, j, k): mono[i] * mono[j] = mono[k]
  std::array<int, 4> unit{};
};

JetSpace build_space(int order) {
  JetSpace sp;
  sp.order = order;
  for (int d = 0; d <= order; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b)
        for (int c = d - a - b; c >= 0; --c) sp.mono.push_back({a, b, c, d - a - b - c});
  for (std::size_t i = 0; i < sp.mono.size(); ++i) sp.index[sp.mono[i]] = int(i);
  for (std::size_t i = 0; i < sp.mono.size(); ++i)
    for (std::size_t j = 0; j < sp.mono.size(); ++j) {
      if (degree(sp.mono[i]) + degree(sp.mono[j]) > order) continue;
      Exps s(4);
      for (int v = 0; v < 4; ++v) s[v] = sp.mono[i][v] + sp.mono[j][v];
      sp.mul.push_back({int(i), int(j), sp.index.at(s)});
    }
  if (order >= 1)
    for (int v = 0; v < 4; ++v) {
      Exps e(4, 0);
      e[v] = 1;
      sp.unit[v] = sp.index.at(e);
    }
  return sp;
}

const JetSpace &space(int order) {
  static const std::array<JetSpace, 4> spaces = {build_space(0), build_space(1), build_space(2),
                                                 build_space(3)};
  if (order < 0 || order > 3) throw Error(ErrorCode::BadParams, "jet order must be in [0, 3]");
  return spaces[order];
}

using Jet = std::vector<cplx>;

Jet jmul(const JetSpace &sp, const Jet &a, const Jet &b) {
  Jet out(sp.mono.size(), 0.0);
  for (const auto &[i, j, k] : sp.mul)
    if (a[i] != 0.0 && b[j] != 0.0) out[k] += a[i] * b[j];
  return out;
}

void jaxpy(Jet &y, cplx s, const Jet &x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

// sum_n c_n u^n with u[0] = 0, so the sum stops at the jet order.
Jet jseries(const JetSpace &sp, const Jet &u, const std::vector<cplx> &c) {
  Jet out(sp.mono.size(), 0.0);
  out[0] = c[0];
  Jet pw = u;
  for (int n = 1; n <= sp.order; ++n) {
    jaxpy(out, c[n], pw);
    if (n < sp.order) pw = jmul(sp, pw, u);
  }
  return out;
}

Jet jinv(const JetSpace &sp, const Jet &a) {
  const cplx a0 = a[0];
  Jet u = a;
  for (auto &x : u) x /= a0;
  u[0] = 0.0;
  std::vector<cplx> c(sp.order + 1);
  for (int n = 0; n <= sp.order; ++n) c[n] = (n % 2 ? -1.0 : 1.0) / a0;
  return jseries(sp, u, c);
}

Jet jsqrt(const JetSpace &sp, const Jet &a) {
  const cplx a0 = a[0];
  const cplx r0 = std::sqrt(a0);
  Jet u = a;
  for (auto &x : u) x /= a0;
  u[0] = 0.0;
  // binomial(1/2, n)
  std::vector<cplx> c(sp.order + 1);
  double b = 1.0;
  for (int n = 0; n <= sp.order; ++n) {
    c[n] = b * r0;
    b *= (0.5 - n) / (n + 1);
  }
  return jseries(sp, u, c);
}

struct Base {
  std::array<cplx, 4> at; // z1, z2, conj z1, conj z2
};

Base make_base(cplx z1, cplx z2) { return {{z1, z2, std::conj(z1), std::conj(z2)}}; }

Jet poly_jet(const JetSpace &sp, const PSeries &p, const Base &b) {
  std::array<int, 4> maxe{};
  for (const auto &[k, v] : p.terms())
    for (int i = 0; i < 4; ++i) maxe[i] = std::max(maxe[i], k[i]);
  // pw[i][e] = (b_i + w_i)^e
  std::array<std::vector<Jet>, 4> pw;
  for (int i = 0; i < 4; ++i) {
    Jet x(sp.mono.size(), 0.0);
    x[0] = b.at[i];
    if (sp.order >= 1) x[sp.unit[i]] = 1.0;
    Jet one(sp.mono.size(), 0.0);
    one[0] = 1.0;
    pw[i].push_back(one);
    for (int e = 1; e <= maxe[i]; ++e) pw[i].push_back(jmul(sp, pw[i].back(), x));
  }
  Jet out(sp.mono.size(), 0.0);
  for (const auto &[k, v] : p.terms()) {
    Jet t = pw[0][k[0]];
    for (int i = 1; i < 4; ++i)
      if (k[i] > 0) t = jmul(sp, t, pw[i][k[i]]);
    jaxpy(out, v, t);
  }
  return out;
}

cplx poly_value(const PSeries &p, const Base &b) {
  cplx s = 0.0;
  for (const auto &[k, v] : p.terms()) {
    cplx t = v;
    for (int i = 0; i < 4; ++i)
      for (int e = 0; e < k[i]; ++e) t *= b.at[i];
    s += t;
  }
  return s;
}

constexpr double kDenFloor = 1e-12;
constexpr double kCollar = 1e-6;

bool radicand_ok(cplx r) {
  if (std::abs(r) < kCollar) return false;
  return !(r.real() < 0.0 && std::abs(r.imag()) < kCollar);
}

// Status of a base point: 0 valid, 1 denominator vanishes, 2 inside a collar.
int point_status(const Chart &ch, const Base &b) {
  if (!ch.den.terms().empty() && std::abs(poly_value(ch.den, b)) <= kDenFloor) return 1;
  for (const auto &rt : ch.roots)
    if (!radicand_ok(poly_value(rt.radicand, b))) return 2;
  return 0;
}

Jet chart_jet(const Chart &ch, const Base &b, int order) {
  const JetSpace &sp = space(order);
  Jet f(sp.mono.size(), 0.0);
  if (!ch.num.terms().empty()) {
    Jet n = poly_jet(sp, ch.num, b);
    if (!ch.den.terms().empty()) n = jmul(sp, n, jinv(sp, poly_jet(sp, ch.den, b)));
    f = n;
  }
  for (const auto &rt : ch.roots) jaxpy(f, rt.coef, jsqrt(sp, poly_jet(sp, rt.radicand, b)));
  return f;
}

// Unknowns: (Re z1, Im z1, Re z2, Im z2), or (Re z2, Im z2) when z1 is pinned.
struct Problem {
  const Chart &ch;
  int dim() const { return ch.pin_z1 ? 2 : 4; }
  Base base(const Eigen::VectorXd &x) const {
    if (ch.pin_z1) return make_base(*ch.pin_z1, cplx(x[0], x[1]));
    return make_base(cplx(x[0], x[1]), cplx(x[2], x[3]));
  }
  Eigen::Vector4d residual(const Jet &f) const {
    const JetSpace &sp = space(1);
    const cplx g1 = f[sp.unit[2]], g2 = f[sp.unit[3]];
    return {g1.real(), g1.imag(), g2.real(), g2.imag()};
  }
  Eigen::Vector4d residual(const Eigen::VectorXd &x) const {
    return residual(chart_jet(ch, base(x), 1));
  }
  // Real Jacobian of (Re G1, Im G1, Re G2, Im G2), G_k = dF/d conj z_k.
  Eigen::MatrixXd jacobian(const Jet &f) const {
    const JetSpace &sp = space(2);
    auto co = [&](Exps e) { return f[sp.index.at(e)]; };
    Eigen::MatrixXd J(4, dim());
    const int j0 = ch.pin_z1 ? 1 : 0;
    for (int k = 0; k < 2; ++k)
      for (int j = j0; j < 2; ++j) {
        Exps ea(4, 0), eb(4, 0);
        ea[j] += 1;
        ea[2 + k] += 1;
        eb[2 + j] += 1;
        eb[2 + k] += 1;
        const cplx A = co(ea);
        const cplx B = co(eb) * (j == k ? 2.0 : 1.0);
        const cplx dx = A + B, dy = cplx(0, 1) * (A - B);
        const int c = 2 * (j - j0);
        J(2 * k, c) = dx.real();
        J(2 * k + 1, c) = dx.imag();
        J(2 * k, c + 1) = dy.real();
        J(2 * k + 1, c + 1) = dy.imag();
      }
    return J;
  }
  bool valid(const Eigen::VectorXd &x) const { return point_status(ch, base(x)) == 0; }
  // Iterates that leave the box by more than its width are abandoned; roots
  // outside the box are discarded anyway.
  bool escaped(const Eigen::VectorXd &x) const {
    const int off = ch.pin_z1 ? 2 : 0;
    for (int i = 0; i < dim(); ++i) {
      const double w = ch.hi[off + i] - ch.lo[off + i];
      if (x[i] < ch.lo[off + i] - w || x[i] > ch.hi[off + i] + w) return true;
    }
    return false;
  }
};

double max_pair(const Eigen::Vector4d &r) {
  return std::max(std::hypot(r[0], r[1]), std::hypot(r[2], r[3]));
}

constexpr double kPolish = 1e-12;
constexpr double kMerge = 1e-6;

// Damped Newton (Gauss-Newton when pinned). Returns the final residual, or a
// negative value when the seed did not converge.
double newton(const Problem &pb, Eigen::VectorXd &x) {
  double res = 0.0;
  for (int it = 0; it < 100; ++it) {
    const Jet f = chart_jet(pb.ch, pb.base(x), 2);
    const Eigen::Vector4d r = pb.residual(f);
    res = max_pair(r);
    if (res <= 1e-14) return res;
    if (!x.allFinite() || pb.escaped(x)) return -1.0;
    const Eigen::MatrixXd J = pb.jacobian(f);
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
    double lambda = 1.0;
    bool moved = false;
    for (int h = 0; h < 40; ++h, lambda *= 0.5) {
      const Eigen::VectorXd xn = x + lambda * step;
      if (!pb.valid(xn)) continue;
      if (pb.residual(xn).norm() < r.norm()) {
        x = xn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return res <= kPolish ? res : -1.0;
}

double seed_coord(double lo, double hi, int i, int n) { return lo + (hi - lo) * (i + 0.5) / n; }

bool lex_less(const CRLocation &a, const CRLocation &b) {
  const std::array<double, 4> ka{a.z1.real(), a.z1.imag(), a.z2.real(), a.z2.imag()};
  const std::array<double, 4> kb{b.z1.real(), b.z1.imag(), b.z2.real(), b.z2.imag()};
  return ka < kb;
}

double loc_dist(cplx a1, cplx a2, cplx b1, cplx b2) {
  return std::sqrt(std::norm(a1 - b1) + std::norm(a2 - b2));
}

void merge_into(std::vector<CRLocation> &kept, const CRLocation &p) {
  for (auto &k : kept)
    if (loc_dist(k.z1, k.z2, p.z1, p.z2) <= kMerge) {
      if (p.residual < k.residual) k = p;
      return;
    }
  kept.push_back(p);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

PSeries chart_taylor(const Chart &chart, cplx z1, cplx z2, int order) {
  const Base b = make_base(z1, z2);
  const int st = point_status(chart, b);
  if (st == 1) throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes in chart " + chart.id);
  if (st == 2) throw Error(ErrorCode::BadParams, "point lies in the branch collar of chart " + chart.id);
  const JetSpace &sp = space(order);
  const Jet f = chart_jet(chart, b, order);
  PSeries out(2, order);
  for (std::size_t i = 0; i < f.size(); ++i) out.set(sp.mono[i], f[i]);
  return out;
}

cplx chart_eval(const Chart &chart, cplx z1, cplx z2) {
  const Base b = make_base(z1, z2);
  const int st = point_status(chart, b);
  if (st == 1) throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes in chart " + chart.id);
  if (st == 2) throw Error(ErrorCode::BadParams, "point lies in the branch collar of chart " + chart.id);
  cplx f = 0.0;
  if (!chart.num.terms().empty()) {
    f = poly_value(chart.num, b);
    if (!chart.den.terms().empty()) f /= poly_value(chart.den, b);
  }
  for (const auto &rt : chart.roots) f += rt.coef * std::sqrt(poly_value(rt.radicand, b));
  return f;
}

bool chart_valid(const Chart &chart, cplx z1, cplx z2) {
  return point_status(chart, make_base(z1, z2)) == 0;
}

double wirtinger_residual(const Chart &chart, cplx z1, cplx z2) {
  const PSeries t = chart_taylor(chart, z1, z2, 1);
  return std::max(std::abs(t.coeff({0, 0, 1, 0})), std::abs(t.coeff({0, 0, 0, 1})));
}

SearchResult find_cr_points(const Chart &chart, int seeds_per_axis) {
  if (seeds_per_axis < 2) throw Error(ErrorCode::BadParams, "seeds_per_axis must be at least 2");
  for (int i = 0; i < 4; ++i)
    if (!(chart.lo[i] < chart.hi[i])) throw Error(ErrorCode::BadParams, "empty domain box in chart " + chart.id);
  const Problem pb{chart};
  const int dim = pb.dim();
  const int off = chart.pin_z1 ? 2 : 0; // box axes used by the unknowns
  SearchResult out;

  std::vector<Eigen::VectorXd> seeds;
  int total = 1;
  for (int i = 0; i < dim; ++i) total *= seeds_per_axis;
  for (int s = 0; s < total; ++s) {
    Eigen::VectorXd x(dim);
    int r = s;
    for (int i = dim - 1; i >= 0; --i) {
      x[i] = seed_coord(chart.lo[off + i], chart.hi[off + i], r % seeds_per_axis, seeds_per_axis);
      r /= seeds_per_axis;
    }
    seeds.push_back(x);
  }
  out.seeds = total;

  // The sample grid doubles as the denominator check and the test for a
  // Wirtinger system that vanishes identically.
  double sample_max = 0.0;
  int usable = 0;
  for (const auto &x : seeds) {
    const int st = point_status(chart, pb.base(x));
    if (st == 1) throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes in chart " + chart.id);
    if (st != 0) continue;
    ++usable;
    const Jet f = chart_jet(chart, pb.base(x), 2);
    sample_max = std::max({sample_max, pb.residual(f).norm(), pb.jacobian(f).norm()});
  }
  if (usable > 0 && sample_max <= 1e-13) {
    out.identically_critical = true;
    return out;
  }

  std::vector<CRLocation> kept;
  for (auto x : seeds) {
    if (!pb.valid(x)) {
      ++out.skipped;
      continue;
    }
    const double res = newton(pb, x);
    if (res < 0) {
      ++out.no_convergence;
      continue;
    }
    const Base b = pb.base(x);
    merge_into(kept, CRLocation{b.at[0], b.at[1], res});
  }

  std::vector<CRLocation> snapped;
  for (auto p : kept) {
    for (const auto &e : chart.exact_points) {
      if (loc_dist(p.z1, p.z2, e[0], e[1]) > kMerge) continue;
      const double r = wirtinger_residual(chart, e[0], e[1]);
      if (r <= std::max(kPolish, p.residual)) {
        p.z1 = e[0];
        p.z2 = e[1];
        p.residual = r;
        p.snapped = true;
      }
      break;
    }
    const std::array<double, 4> c{p.z1.real(), p.z1.imag(), p.z2.real(), p.z2.imag()};
    bool inside = true;
    for (int i = off; i < 4; ++i) {
      if (c[i] < chart.lo[i] - kMerge || c[i] > chart.hi[i] + kMerge) inside = false;
      if (std::abs(c[i] - chart.lo[i]) <= kMerge || std::abs(c[i] - chart.hi[i]) <= kMerge)
        p.on_boundary = true;
    }
    if (!inside) {
      ++out.outside;
      continue;
    }
    merge_into(snapped, p);
  }
  std::sort(snapped.begin(), snapped.end(), lex_less);
  out.points = std::move(snapped);
  return out;
}

PSeries local_model(const Chart &chart, cplx z1, cplx z2) {
  const PSeries t = chart_taylor(chart, z1, z2, 3);
  const double res = std::max(std::abs(t.coeff({0, 0, 1, 0})), std::abs(t.coeff({0, 0, 0, 1})));
  if (res > 1e-10)
    throw Error(ErrorCode::ResidualTooLarge,
                "Wirtinger residual " + fmt_double(res) + " at the requested point of chart " + chart.id);
  // Constant, holomorphic linear part (the z3 shear) and the residual-level
  // antiholomorphic linear part all go; degree >= 2 terms are untouched.
  PSeries h(2, 3);
  for (const auto &[k, v] : t.terms())
    if (degree(k) >= 2) h.set(k, v);
  return h;
}

const char *orientation_name(Orientation o) { return o == Orientation::Plus ? "N2+" : "N2-"; }

int index_value(PointIndex i) { return i == PointIndex::Plus ? 1 : i == PointIndex::Minus ? -1 : 0; }

const char *index_name(PointIndex i) {
  return i == PointIndex::Plus ? "+1" : i == PointIndex::Minus ? "-1" : "degenerate";
}

PSeries conjugate_first(const PSeries &model) {
  if (model.nvars() != 2) throw Error(ErrorCode::DimensionMismatch, "conjugate_first needs two variables");
  PSeries out(2, model.trunc());
  for (const auto &[k, v] : model.terms()) out.set({k[2], k[1], k[0], k[3]}, v);
  return out;
}

PointIndex point_index(const PSeries &model, Orientation orientation) {
  const PSeries m = orientation == Orientation::Minus ? conjugate_first(model) : model;
  const QuadData q = extract_QRS(m);
  const CMat P = 2.0 * q.S.conj();
  const double scale = std::max(q.R.max_abs(), P.max_abs());
  if (scale == 0.0) return PointIndex::Degenerate;
  const double det = build_gamma(q.R, P).det().real();
  const double cut = 1e-10 * std::pow(scale, 2 * int(q.R.rows()));
  if (std::abs(det) <= cut) return PointIndex::Degenerate;
  return det > 0 ? PointIndex::Plus : PointIndex::Minus;
}

double ambient_distance(const ChartedManifold &m, const std::vector<cplx> &a, const std::vector<cplx> &b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "ambient points differ in length");
  if (!m.projective) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
  }
  // Chordal distance between lines: sin of the angle between a and b.
  cplx ip = 0.0;
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ip += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  return std::sqrt(std::max(0.0, 1.0 - std::norm(ip) / (na * nb)));
}

Enumeration enumerate(const ChartedManifold &m, const EnumerateOptions &opt) {
  Enumeration out;
  std::vector<CRPoint> pts;
  for (const auto &ch : m.charts) {
    const SearchResult sr = find_cr_points(ch, opt.seeds_per_axis);
    out.no_convergence += sr.no_convergence;
    if (sr.identically_critical) {
      out.identically_critical = true;
      out.general_position = false;
      out.warnings.push_back("chart " + ch.id + ": Wirtinger system vanishes identically");
      continue;
    }
    for (const auto &loc : sr.points) {
      CRPoint p;
      p.chart = ch.id;
      p.z1 = loc.z1;
      p.z2 = loc.z2;
      p.residual = loc.residual;
      p.on_boundary = loc.on_boundary;
      p.snapped = loc.snapped;
      const cplx f = chart_eval(ch, loc.z1, loc.z2);
      p.ambient = ch.ambient ? ch.ambient(loc.z1, loc.z2, f) : std::vector<cplx>{loc.z1, loc.z2, f};
      p.orientation = ch.orientation > 0 ? Orientation::Plus : Orientation::Minus;
      p.model = local_model(ch, loc.z1, loc.z2);
      p.index = point_index(p.model, p.orientation);
      const QuadData q = extract_QRS(p.model);
      p.row = classify_pair(q.R, q.S);

      bool dup = false;
      for (const auto &k : pts)
        if (ambient_distance(m, k.ambient, p.ambient) <= kMerge) {
          dup = true;
          if (k.index != p.index || k.orientation != p.orientation)
            out.warnings.push_back("chart " + ch.id + " disagrees with chart " + k.chart +
                                   " on a shared point");
          break;
        }
      if (!dup) pts.push_back(std::move(p));
    }
  }
  std::stable_sort(pts.begin(), pts.end(), [](const CRPoint &a, const CRPoint &b) {
    if (a.chart != b.chart) return a.chart < b.chart;
    return lex_less(CRLocation{a.z1, a.z2}, CRLocation{b.z1, b.z2});
  });
  for (const auto &p : pts) {
    if (p.on_boundary) ++out.boundary;
    if (p.index == PointIndex::Degenerate) {
      ++out.degenerate;
      out.general_position = false;
      continue;
    }
    (p.orientation == Orientation::Plus ? out.I_plus : out.I_minus) += index_value(p.index);
  }
  // The other orientation of the negative complex locus flips every N2- sign.
  if (opt.convention == Convention::Switched) out.I_minus = -out.I_minus;
  if (out.degenerate > 0)
    out.warnings.push_back(std::to_string(out.degenerate) +
                           " degenerate point(s): not in general position, sums are not topological");
  out.points = std::move(pts);
  return out;
}

TopologyReport topology_check(const ChartedManifold &m, int I_plus, int I_minus, Convention convention) {
  if (!m.expected_topology) throw Error(ErrorCode::BadParams, "manifold " + m.name + " has no expected topology");
  const Topology &t = *m.expected_topology;
  TopologyReport r;
  r.sum = I_plus + I_minus;
  r.diff = I_plus - I_minus;
  if (t.target == Topology::Target::C3) {
    r.expected_sum = t.chi;
    r.expected_diff = -t.p1;
  } else {
    const int d = t.degree;
    r.expected_sum = t.chi + 4 * d * d;
    r.expected_diff = 6 * d + d * d * d;
  }
  if (convention == Convention::Switched) std::swap(r.expected_sum, r.expected_diff);
  if (r.sum != r.expected_sum)
    r.mismatches.push_back("I+ + I- = " + std::to_string(r.sum) + ", expected " + std::to_string(r.expected_sum));
  if (r.diff != r.expected_diff)
    r.mismatches.push_back("I+ - I- = " + std::to_string(r.diff) + ", expected " +
                           std::to_string(r.expected_diff));
  r.pass = r.mismatches.empty();
  return r;
}

namespace {

// Real-coordinate squares as polynomials in (z, conj z): x_k^2 and y_k^2 for
// base variable k in {0, 1}.
void add_x_sq(PSeries &p, int k, double c) {
  Exps a(4, 0), b(4, 0), m(4, 0);
  a[k] = 2;
  b[2 + k] = 2;
  m[k] = 1;
  m[2 + k] = 1;
  p.set(a, p.coeff(a) + c / 4);
  p.set(b, p.coeff(b) + c / 4);
  p.set(m, p.coeff(m) + c / 2);
}

void add_y_sq(PSeries &p, int k, double c) {
  Exps a(4, 0), b(4, 0), m(4, 0);
  a[k] = 2;
  b[2 + k] = 2;
  m[k] = 1;
  m[2 + k] = 1;
  p.set(a, p.coeff(a) - c / 4);
  p.set(b, p.coeff(b) - c / 4);
  p.set(m, p.coeff(m) + c / 2);
}

PSeries constant_poly(cplx v, int trunc) {
  PSeries p(2, trunc);
  p.set({0, 0, 0, 0}, v);
  return p;
}

void require_positive(const std::vector<double> &v, const std::string &what) {
  for (double x : v)
    if (!(x > 0) || !std::isfinite(x)) throw Error(ErrorCode::BadParams, what + " parameters must be positive");
}

// Homogeneous term c * z^a * conj(z)^b on (z0, z1, z2).
struct HTerm {
  double c;
  std::array<int, 3> a, b;
};

// Dehomogenize at z_fixed = 1; the remaining two variables become (u1, u2).
PSeries dehomogenize(const std::vector<HTerm> &terms, int fixed, double scale) {
  std::array<int, 2> keep{};
  for (int i = 0, j = 0; i < 3; ++i)
    if (i != fixed) keep[j++] = i;
  PSeries p(2, 3);
  for (const auto &t : terms) {
    const Exps k{t.a[keep[0]], t.a[keep[1]], t.b[keep[0]], t.b[keep[1]]};
    p.set(k, p.coeff(k) + scale * t.c);
  }
  return p;
}

} // namespace

ChartedManifold s4_ellipsoid(const std::array<double, 5> &d) {
  require_positive({d.begin(), d.end()}, "s4_ellipsoid");
  ChartedManifold m;
  m.name = "s4_ellipsoid";
  PSeries rad = constant_poly(1.0, 2);
  add_x_sq(rad, 0, -d[0]);
  add_y_sq(rad, 0, -d[1]);
  add_x_sq(rad, 1, -d[2]);
  add_y_sq(rad, 1, -d[3]);
  for (int s : {+1, -1}) {
    Chart ch;
    ch.id = s > 0 ? "north" : "south";
    ch.num = PSeries(2, 2);
    ch.den = PSeries(2, 2);
    ch.roots.push_back({s / std::sqrt(d[4]), rad});
    for (int i = 0; i < 4; ++i) {
      ch.hi[i] = 1.0 / std::sqrt(d[i]);
      ch.lo[i] = -ch.hi[i];
    }
    // The two hemispheres carry opposite orientations relative to the base.
    ch.orientation = s;
    ch.exact_points = {{0.0, 0.0}};
    m.charts.push_back(std::move(ch));
  }
  m.expected_topology = Topology{Topology::Target::C3, 2, 0, 0};
  return m;
}

ChartedManifold s2xs2(const std::array<double, 6> &p) {
  require_positive({p.begin(), p.end()}, "s2xs2");
  const double a = p[0], b = p[1], c = p[2], d = p[3], e = p[4], f = p[5];
  ChartedManifold m;
  m.name = "s2xs2";
  PSeries r1 = constant_poly(1.0, 2), r2 = constant_poly(1.0, 2);
  add_x_sq(r1, 0, -a);
  add_y_sq(r1, 0, -b);
  add_x_sq(r2, 1, -d);
  add_y_sq(r2, 1, -e);
  for (int e1 : {+1, -1})
    for (int e2 : {+1, -1}) {
      Chart ch;
      ch.id = std::string("eta=(") + (e1 > 0 ? '+' : '-') + "," + (e2 > 0 ? '+' : '-') + ")";
      ch.num = PSeries(2, 2);
      ch.den = PSeries(2, 2);
      // Branch eta sits at x3 = -eta1/sqrt(c), y3 = -eta2/sqrt(f), so the
      // quadratic part at z = 0 is +eta1 (a x1^2 + b y1^2)/(2 sqrt c) + ....
      ch.roots.push_back({-e1 / std::sqrt(c), r1});
      ch.roots.push_back({cplx(0, -e2 / std::sqrt(f)), r2});
      const std::array<double, 4> half{1 / std::sqrt(a), 1 / std::sqrt(b), 1 / std::sqrt(d), 1 / std::sqrt(e)};
      for (int i = 0; i < 4; ++i) {
        ch.hi[i] = half[i];
        ch.lo[i] = -half[i];
      }
      ch.orientation = e1 * e2;
      ch.exact_points = {{0.0, 0.0}};
      m.charts.push_back(std::move(ch));
    }
  m.expected_topology = Topology{Topology::Target::C3, 4, 0, 0};
  return m;
}

ChartedManifold cp2_iota(double t) {
  if (!(t != 0.0) || !std::isfinite(t)) throw Error(ErrorCode::BadParams, "cp2_iota needs a finite t != 0");
  // P = 6 z0 conj z0 + z1 conj z1 + 6 z2 conj z2
  const std::vector<HTerm> P{
      {6, {1, 0, 0}, {1, 0, 0}}, {1, {0, 1, 0}, {0, 1, 0}}, {6, {0, 0, 1}, {0, 0, 1}}};
  // Q = 2 z0^2 conj z1 + 2 z0 z1 conj z2 - z0 z2 conj z1 + 2 z1 z2 conj z0
  const std::vector<HTerm> Q{{2, {2, 0, 0}, {0, 1, 0}},
                             {2, {1, 1, 0}, {0, 0, 1}},
                             {-1, {1, 0, 1}, {0, 1, 0}},
                             {2, {0, 1, 1}, {1, 0, 0}}};
  ChartedManifold m;
  m.name = "cp2_iota";
  m.projective = true;
  const double r3 = std::sqrt(3.0);
  for (int fixed = 0; fixed < 3; ++fixed) {
    Chart ch;
    ch.id = "z" + std::to_string(fixed) + "=1";
    ch.num = dehomogenize(Q, fixed, t);
    ch.den = dehomogenize(P, fixed, 1.0);
    ch.orientation = +1;
    if (fixed == 0) {
      ch.exact_points = {{0.0, 2.0}, {r3, 1.0}, {-r3, 1.0}, {cplx(0, 3), -1.0}, {cplx(0, -3), -1.0}};
    } else {
      // Only the line at infinity z0 = 0 is new in these charts. Its two
      // pinned charts cover it together with |other coordinate| <= 1, and
      // dF/d conj z0 = 2u/(c + 6|u|^2)-type residuals decay outward, so
      // seeds far from the origin run off to infinity; keep the box tight.
      ch.pin_z1 = 0.0;
      ch.lo = {-1.5, -1.5, -1.5, -1.5};
      ch.hi = {1.5, 1.5, 1.5, 1.5};
      ch.exact_points = {{0.0, 0.0}};
    }
    ch.ambient = [fixed](cplx u1, cplx u2, cplx f) {
      std::vector<cplx> z{u1, u2};
      z.insert(z.begin() + fixed, 1.0);
      z.push_back(f);
      return z;
    };
    m.charts.push_back(std::move(ch));
  }
  m.expected_topology = Topology{Topology::Target::CP3, 3, 0, 1};
  return m;
}

ChartedManifold builtin(const std::string &name, const std::vector<double> &params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw Error(ErrorCode::BadParams, name + " takes " + std::to_string(n) + " parameters, got " +
                                            std::to_string(params.size()));
  };
  if (name == "s4_ellipsoid" || name == "s4") {
    need(5);
    return s4_ellipsoid({params[0], params[1], params[2], params[3], params[4]});
  }
  if (name == "s2xs2") {
    need(6);
    return s2xs2({params[0], params[1], params[2], params[3], params[4], params[5]});
  }
  if (name == "cp2_iota" || name == "cp2") {
    need(1);
    return cp2_iota(params[0]);
  }
  throw Error(ErrorCode::BadParams, "unknown builtin " + name);
}

} // namespace crsing
