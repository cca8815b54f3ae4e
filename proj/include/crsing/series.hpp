#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crsing/matcore.hpp"

namespace crsing {

using Exps = std::vector<int>;

// Truncated power series in (z, conj z) with nvars tangential variables.
// Keys are alpha ++ beta (length 2*nvars); absent keys are zero and every key
// has total degree <= trunc.
class PSeries {
public:
  using Terms = std::map<Exps, cplx>;

  PSeries() = default;
  PSeries(int nvars, int trunc);

  int nvars() const { return nvars_; }
  int trunc() const { return trunc_; }
  const Terms &terms() const { return terms_; }

  cplx coeff(const Exps &alpha, const Exps &beta) const;
  cplx coeff(const Exps &key) const;
  // Terms above trunc are dropped silently; zero values erase the key.
  void set(const Exps &alpha, const Exps &beta, cplx v);
  void set(const Exps &key, cplx v);
  void add(const Exps &alpha, const Exps &beta, cplx v);

  double max_abs() const;
  PSeries homogeneous(int degree) const;
  PSeries truncated(int trunc) const;
  // The series of conj(h): coefficient at (alpha, beta) is conj of (beta, alpha).
  PSeries conjugate() const;
  bool is_holomorphic() const;
  // No constant or linear terms, up to eps times max(1, max_abs()).
  bool standard_position(double eps = 1e-12) const;

  friend bool operator==(const PSeries &, const PSeries &) = default;

private:
  int nvars_ = 0;
  int trunc_ = 0;
  Terms terms_;
};

int degree(const Exps &key);
// Key for alpha ++ beta.
Exps make_key(const Exps &alpha, const Exps &beta);

// z_tilde = C z + p(z) on C^n with z_n the normal coordinate. p[k] is a
// holomorphic series in all n variables (nvars = n, beta = 0) whose terms
// have degree >= 2.
struct HoloChange {
  CMat C;
  std::vector<PSeries> p;

  static HoloChange identity(int n, int trunc);
  int n() const { return int(C.rows()); }
  // Coefficient of z^alpha in p[k]; alpha has length n.
  void set_p(int k, const Exps &alpha, cplx v);
  cplx p_coeff(int k, const Exps &alpha) const;
};

struct QuadData {
  CMat Q, R, S;
};

QuadData extract_QRS(const PSeries &h);
PSeries eliminate_Q(const PSeries &h);
PSeries apply_change(const PSeries &h, const HoloChange &t);
// The change t2 after t1, truncated at total degree trunc.
HoloChange compose(const HoloChange &t2, const HoloChange &t1, int trunc);

// Standard-position series with quadratic part q and no higher terms.
PSeries quadratic_series(const CMat &Q, const CMat &R, const CMat &S, int trunc);

// Names of the six reality conditions on the cubic coefficients, in order.
const std::vector<std::string> &cubic_condition_names();
// Indices of the conditions violated beyond tol (relative to max(1, |e|)).
std::vector<int> violated_cubic_conditions(const PSeries &h, double tol = 1e-10);

struct FlattenResult {
  PSeries h;
  HoloChange change;
};
FlattenResult cubic_flatten(const PSeries &h);

enum class Sign { Plus, Minus, Zero };
char sign_char(Sign s);

struct HessianIndex {
  double det = 0.0;
  Sign sign = Sign::Zero;
};
// det(Hf1 + J Hf2) built from the second real derivatives of h at 0;
// nvars must be 1 or 2.
HessianIndex hessian_index(const PSeries &h);
// The real (2k x 2k) matrix Hf1 + J Hf2 itself.
Eigen::MatrixXd hessian_matrix(const PSeries &h);

} // namespace crsing
