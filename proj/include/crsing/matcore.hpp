#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crsing/errors.hpp"

namespace crsing {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;

// Dense complex matrix, row-major. tol is the relative threshold used by
// rank and the Hermitian/symmetric predicates; 0 < tol < 1.
class CMat {
public:
  CMat() = default;
  CMat(std::size_t rows, std::size_t cols, double tol = kDefaultTol);
  CMat(std::size_t rows, std::size_t cols, std::vector<cplx> entries,
       double tol = kDefaultTol);
  CMat(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMat zeros(std::size_t rows, std::size_t cols) { return CMat(rows, cols); }
  static CMat identity(std::size_t n);
  static CMat diag(const std::vector<cplx> &d);
  static CMat from_eigen(const MatrixXcd &m, double tol = kDefaultTol);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  double tol() const { return tol_; }
  CMat &set_tol(double t);
  const std::vector<cplx> &entries() const { return a_; }

  cplx &operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  MatrixXcd to_eigen() const;

  CMat conj() const;
  CMat transpose() const;
  CMat adjoint() const;

  double norm() const; // Frobenius
  double max_abs() const;
  cplx trace() const;
  cplx det() const;
  CMat inverse() const;

  CMat operator+(const CMat &o) const;
  CMat operator-(const CMat &o) const;
  CMat operator*(const CMat &o) const;
  CMat operator-() const;
  friend CMat operator*(cplx s, const CMat &m);

  bool is_hermitian() const;
  bool is_symmetric() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
  double tol_ = kDefaultTol;
};

struct Signature {
  int p = 0;
  int q = 0;
  int rank = 0;
};

struct TakagiFactors {
  CMat U;
  CMat D;
};

// Frobenius distance.
double dist(const CMat &a, const CMat &b);

int rank(const CMat &m);
std::vector<double> singular_values(const CMat &m);
Signature hermitian_signature(const CMat &h);

// S = U D U^T with U unitary and D = diag(singular values), descending.
TakagiFactors takagi(const CMat &s);

// c * conj(A)^T * M * A
CMat star_congruence(cplx c, const CMat &a, const CMat &m);
// c * A^T * M * A
CMat sym_congruence(cplx c, const CMat &a, const CMat &m);

// [[R, conj(P)], [P, conj(R)]]
CMat build_gamma(const CMat &r, const CMat &p);

// Real 2n x 2n matrices from the interleaved real/imaginary expansion:
// R entries become rotation blocks [[x,-y],[y,x]], S entries become
// reflection blocks [[x,y],[y,-x]].
std::pair<MatrixXd, MatrixXd> realify(const CMat &r, const CMat &s);

// Unitary with K * realify(R,0) * K^H = blockdiag(R, conj R) and
// K * realify(0,S) * K^H = [[0,S],[conj S,0]].
CMat kappa_matrix(std::size_t n);

CMat from_real(const MatrixXd &m);

} // namespace crsing
