#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crsing/matcore.hpp"

namespace crsing {

enum class RKind { Theta, Tau, Cusp, RankOneHermitian, Zero };

// Star-congruence class of R up to a nonzero scalar. param holds theta in
// [0, pi] for Theta and tau in [0, 1) for Tau; it is unused otherwise.
struct RCase {
  RKind kind = RKind::Zero;
  double param = 0.0;
};

const char *rkind_name(RKind k);
std::string rcase_label(const RCase &rc);

struct Witness {
  cplx c = 1.0;
  CMat A = CMat::identity(2);
  double residual = 0.0;
};

struct RClass {
  RCase rcase;
  CMat N;
  Witness witness; // N = c conj(A)^T R A
  bool boundary = false;
};

struct Modulus {
  std::string name;
  cplx value;
  int dof = 1; // real degrees of freedom: 2 for a free complex value
};

struct PNormal {
  CMat P;                 // canonical P
  std::string shape;      // row shape, e.g. "[[a,b],[b,d]]"
  std::vector<Modulus> moduli;
  Witness witness;        // stabilizes N, sends P_in to P
  CMat N;                 // N after normalization (equal to the input N except
                          // in the complex-eigenvalue and Jordan sub-cases of
                          // the indefinite flat case)
  bool boundary = false;
};

enum class DetSign { Plus, Minus, Zero };
char det_sign_char(DetSign s);

struct TableRow {
  RCase r_case;
  CMat N, P;
  std::string shape;
  std::vector<Modulus> moduli;
  int rho_N = 0;
  std::optional<int> sigma_N;
  int rho_P = 0;
  int rho_NP = 0;
  int rho_Gamma = 0;
  std::optional<int> sigma_Gamma;
  DetSign det_sign = DetSign::Zero;
  Witness witness; // (N,P) = (c conj(A)^T R A, conj(c) A^T P_in A), P_in = 2 conj(S)
  bool boundary = false;
};

struct HermPairForm {
  enum class Kind { DiagDiag, OffK, OffXY } kind = Kind::DiagDiag;
  double k1 = 0, k2 = 0; // DiagDiag: B = diag(k1, k2) against N = diag(1,-1)
  double k = 0;          // OffK: B = [[0,k],[k,eps]] against N = [[0,1],[1,0]]
  int eps = 0;           // sign characteristic of the Jordan block, +-1
  double x = 0, y = 0;   // OffXY: B = [[0, x+iy],[x-iy, 0]] against N = [[0,1],[1,0]]
};

RClass classify_R(const CMat &r);
PNormal normalize_P(const RCase &rc, const CMat &n, const CMat &p);
TableRow classify_pair(const CMat &r, const CMat &s);

std::optional<double> is_quadratically_flat(const CMat &r);

struct FlatInvariants {
  int rho_Gamma = 0;
  int sigma_Gamma = 0;
};
FlatInvariants flat_invariants(const CMat &r, const CMat &p);

enum class Quadric { W1sqW2sq, Z2W2W1sq, W1sq, Z1W1Z2W2, Z1W1, Zero };
const char *quadric_name(Quadric q);
Quadric complexification_class(const CMat &r, const CMat &s);

HermPairForm hermitian_pair_normalize(const CMat &nh, const CMat &b);

// Residual of a claimed normalization (N,P) = (c conj(A)^T R A, conj(c) A^T P A).
double witness_residual(const CMat &r, const CMat &p_in, const CMat &n, const CMat &p_out,
                        cplx c, const CMat &a);

// Canonical representative of the pair {z, -z}: nonnegative real part first,
// then nonnegative imaginary part.
bool prefers_negation(cplx z, double eps = 1e-12);

} // namespace crsing
