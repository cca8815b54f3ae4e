#include "crsing/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crsing {

const char *error_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotHermitian: return "NotHermitian";
  case ErrorCode::NotSymmetric: return "NotSymmetric";
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::WitnessNotConverged: return "WitnessNotConverged";
  case ErrorCode::StabilizerSolveFailed: return "StabilizerSolveFailed";
  case ErrorCode::NCongruenceFailed: return "NCongruenceFailed";
  case ErrorCode::NotStandardPosition: return "NotStandardPosition";
  case ErrorCode::TruncationTooLow: return "TruncationTooLow";
  case ErrorCode::NonInvertibleC: return "NonInvertibleC";
  case ErrorCode::PreconditionViolated: return "PreconditionViolated";
  case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
  case ErrorCode::BadParams: return "BadParams";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::Singular: return "Singular";
  }
  return "Unknown";
}

CMat::CMat(std::size_t rows, std::size_t cols, double tol)
    : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0, 0.0)) {
  set_tol(tol);
}

CMat::CMat(std::size_t rows, std::size_t cols, std::vector<cplx> entries, double tol)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match shape");
  set_tol(tol);
}

CMat::CMat(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto &r : rows) {
    if (r.size() != cols_)
      throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

CMat &CMat::set_tol(double t) {
  if (!(t > 0.0 && t < 1.0))
    throw Error(ErrorCode::BadParams, "tolerance must lie in (0,1)");
  tol_ = t;
  return *this;
}

CMat CMat::identity(std::size_t n) {
  CMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat CMat::diag(const std::vector<cplx> &d) {
  CMat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMat CMat::from_eigen(const MatrixXcd &e, double tol) {
  CMat m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()), tol);
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = e(Eigen::Index(i), Eigen::Index(j));
  return m;
}

MatrixXcd CMat::to_eigen() const {
  MatrixXcd e(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) e(Eigen::Index(i), Eigen::Index(j)) = (*this)(i, j);
  return e;
}

CMat CMat::conj() const {
  CMat m = *this;
  for (auto &x : m.a_) x = std::conj(x);
  return m;
}

CMat CMat::transpose() const {
  CMat m(cols_, rows_, tol_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

CMat CMat::adjoint() const { return transpose().conj(); }

double CMat::norm() const {
  double s = 0.0;
  for (const auto &x : a_) s += std::norm(x);
  return std::sqrt(s);
}

double CMat::max_abs() const {
  double s = 0.0;
  for (const auto &x : a_) s = std::max(s, std::abs(x));
  return s;
}

cplx CMat::trace() const {
  if (!square()) throw Error(ErrorCode::DimensionMismatch, "trace of non-square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

cplx CMat::det() const {
  if (!square()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  if (rows_ == 0) return 1.0;
  if (rows_ == 1) return a_[0];
  if (rows_ == 2) return a_[0] * a_[3] - a_[1] * a_[2];
  return to_eigen().partialPivLu().determinant();
}

CMat CMat::inverse() const {
  if (!square()) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  Eigen::FullPivLU<MatrixXcd> lu(to_eigen());
  if (!lu.isInvertible()) throw Error(ErrorCode::Singular, "matrix is singular");
  return from_eigen(lu.inverse(), tol_);
}

static void require_same_shape(const CMat &a, const CMat &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "shape mismatch");
}

CMat CMat::operator+(const CMat &o) const {
  require_same_shape(*this, o);
  CMat m = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] += o.a_[k];
  return m;
}

CMat CMat::operator-(const CMat &o) const {
  require_same_shape(*this, o);
  CMat m = *this;
  for (std::size_t k = 0; k < a_.size(); ++k) m.a_[k] -= o.a_[k];
  return m;
}

CMat CMat::operator-() const {
  CMat m = *this;
  for (auto &x : m.a_) x = -x;
  return m;
}

CMat CMat::operator*(const CMat &o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::DimensionMismatch, "product shape mismatch");
  CMat m(rows_, o.cols_, tol_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const cplx x = (*this)(i, k);
      if (x == cplx(0.0)) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) m(i, j) += x * o(k, j);
    }
  return m;
}

CMat operator*(cplx s, const CMat &m) {
  CMat r = m;
  for (auto &x : r.a_) x *= s;
  return r;
}

bool CMat::is_hermitian() const {
  return square() && dist(*this, adjoint()) <= tol_ * std::max(norm(), 1e-300);
}

bool CMat::is_symmetric() const {
  return square() && dist(*this, transpose()) <= tol_ * std::max(norm(), 1e-300);
}

double dist(const CMat &a, const CMat &b) { return (a - b).norm(); }

std::vector<double> singular_values(const CMat &m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<MatrixXcd> svd(m.to_eigen());
  const auto &sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

int rank(const CMat &m) {
  const auto sv = singular_values(m);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = m.tol() * sv.front();
  return int(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > cut; }));
}

Signature hermitian_signature(const CMat &h) {
  if (!h.square()) throw Error(ErrorCode::DimensionMismatch, "signature of non-square matrix");
  const double nh = h.norm();
  if (dist(h, h.adjoint()) > h.tol() * nh)
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  Signature sig;
  if (nh == 0.0) return sig;
  MatrixXcd sym = h.to_eigen();
  sym = (0.5 * (sym + sym.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
  const double cut = h.tol() * nh;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double ev = es.eigenvalues()(k);
    if (ev > cut) ++sig.p;
    else if (ev < -cut) ++sig.q;
  }
  sig.rank = sig.p + sig.q;
  return sig;
}

namespace {

// First entry of v that is not negligible; used to fix column phases.
std::size_t leading_index(const Eigen::VectorXcd &v) {
  const double cut = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > cut) return std::size_t(i);
  return 0;
}

} // namespace

TakagiFactors takagi(const CMat &s) {
  if (!s.square()) throw Error(ErrorCode::DimensionMismatch, "Takagi of non-square matrix");
  const double ns = s.norm();
  if (dist(s, s.transpose()) > s.tol() * std::max(ns, 1e-300))
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric within tolerance");
  const Eigen::Index n = Eigen::Index(s.rows());
  TakagiFactors out{CMat::identity(s.rows()), CMat::zeros(s.rows(), s.rows())};
  if (ns == 0.0) return out;

  // Real symmetric embedding: an eigenvector [x;y] for eigenvalue sigma gives
  // u = x + iy with S conj(u) = sigma u. Eigenvalues come in +-sigma pairs.
  const MatrixXcd se = s.to_eigen();
  const MatrixXd sr = se.real(), si = se.imag();
  MatrixXd b(2 * n, 2 * n);
  b << sr, si, si, -sr;
  b = (0.5 * (b + b.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b);
  const double smax = es.eigenvalues()(2 * n - 1);
  const double cut = s.tol() * smax;

  MatrixXcd u = MatrixXcd::Zero(n, n);
  std::vector<double> d(std::size_t(n), 0.0);
  Eigen::Index kept = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index col = 2 * n - 1 - k;
    const double sigma = es.eigenvalues()(col);
    if (sigma <= cut) break;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = cplx(es.eigenvectors()(i, col), es.eigenvectors()(n + i, col));
    v.normalize();
    // Only a real sign is free here; flip so the leading entry leans positive.
    const cplx lead = v(Eigen::Index(leading_index(v)));
    if (lead.real() < -1e-12 || (std::abs(lead.real()) <= 1e-12 && lead.imag() < 0)) v = -v;
    u.col(kept) = v;
    d[std::size_t(kept)] = sigma;
    ++kept;
  }
  // Complete the null part with complex Gram-Schmidt; any orthonormal
  // completion works because S conj(u) = 0 on the orthogonal complement.
  for (Eigen::Index e = 0; e < n && kept < n; ++e) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < kept; ++j) v -= u.col(j) * u.col(j).dot(v);
    if (v.norm() < 1e-6) continue;
    v.normalize();
    const cplx lead = v(Eigen::Index(leading_index(v)));
    v *= std::conj(lead) / std::abs(lead);
    u.col(kept++) = v;
  }
  out.U = CMat::from_eigen(u, s.tol());
  out.D = CMat::diag(std::vector<cplx>(d.begin(), d.end()));
  const double err = dist(out.U * out.D * out.U.transpose(), s);
  if (err > std::max(s.tol(), 1e-12) * std::max(ns, 1.0))
    throw Error(ErrorCode::NotSymmetric, "Takagi reconstruction failed");
  return out;
}

CMat star_congruence(cplx c, const CMat &a, const CMat &m) {
  if (!a.square() || !m.square() || a.rows() != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "congruence needs square matrices of equal size");
  return c * (a.adjoint() * m * a);
}

CMat sym_congruence(cplx c, const CMat &a, const CMat &m) {
  if (!a.square() || !m.square() || a.rows() != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "congruence needs square matrices of equal size");
  return c * (a.transpose() * m * a);
}

CMat build_gamma(const CMat &r, const CMat &p) {
  if (!r.square() || !p.square() || r.rows() != p.rows())
    throw Error(ErrorCode::DimensionMismatch, "Gamma needs square blocks of equal size");
  const std::size_t n = r.rows();
  CMat g(2 * n, 2 * n, r.tol());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = r(i, j);
      g(i, j + n) = std::conj(p(i, j));
      g(i + n, j) = p(i, j);
      g(i + n, j + n) = std::conj(r(i, j));
    }
  return g;
}

std::pair<MatrixXd, MatrixXd> realify(const CMat &r, const CMat &s) {
  if (!r.square() || !s.square() || r.rows() != s.rows())
    throw Error(ErrorCode::DimensionMismatch, "realify needs square blocks of equal size");
  const Eigen::Index n = Eigen::Index(r.rows());
  MatrixXd rp = MatrixXd::Zero(2 * n, 2 * n), sp = MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx x = r(std::size_t(i), std::size_t(j));
      rp(2 * i, 2 * j) = x.real();
      rp(2 * i, 2 * j + 1) = -x.imag();
      rp(2 * i + 1, 2 * j) = x.imag();
      rp(2 * i + 1, 2 * j + 1) = x.real();
      const cplx y = s(std::size_t(i), std::size_t(j));
      sp(2 * i, 2 * j) = y.real();
      sp(2 * i, 2 * j + 1) = y.imag();
      sp(2 * i + 1, 2 * j) = y.imag();
      sp(2 * i + 1, 2 * j + 1) = -y.real();
    }
  return {rp, sp};
}

CMat kappa_matrix(std::size_t n) {
  const double h = std::numbers::sqrt2 / 2.0;
  CMat k(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, 2 * i) = h;
    k(i, 2 * i + 1) = cplx(0.0, h);
    k(n + i, 2 * i) = h;
    k(n + i, 2 * i + 1) = cplx(0.0, -h);
  }
  return k;
}

CMat from_real(const MatrixXd &m) { return CMat::from_eigen(m.cast<cplx>()); }

} // namespace crsing
