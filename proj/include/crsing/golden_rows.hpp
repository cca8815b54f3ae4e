#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crsing/matcore.hpp"

namespace crsing::fixtures {

// A canonical (N, P) pair with its expected normal-form data. Integer fields
// set to -1 are not checked; signs lists every allowed determinant sign.
struct GoldenRow {
  std::string label;
  CMat N, P;
  std::string shape;
  int moduli_dof = -1;
  std::string signs;
  int rho_P = -1, rho_NP = -1, rho_Gamma = -1, sigma_Gamma = -1;
};

inline std::vector<GoldenRow> table_rows() {
  const cplx i(0.0, 1.0);
  const double th = 1.0, tau = 0.4;
  const CMat n_theta = CMat::diag({1.0, std::polar(1.0, th)});
  const CMat n_tau{{0, 1}, {tau, 0}};
  const CMat n_tau0{{0, 1}, {0, 0}};
  const CMat n_cusp{{0, 1}, {1, i}};
  const CMat n_swap{{0, 1}, {1, 0}};
  const CMat hyp = CMat::diag({1.0, -1.0});
  const CMat e11 = CMat::diag({1.0, 0.0});
  const CMat zero = CMat::zeros(2, 2);
  const cplx ua = std::polar(1.0, 0.5), ud = std::polar(1.0, 0.8);
  const cplx bt(0.3, 0.2);
  return {
      {"theta (a b;b d)", n_theta, CMat{{0.8, bt}, {bt, 1.7}}, "[[a,b],[b,d]]", 5, "+-0"},
      {"theta (0 b;b d)", n_theta, CMat{{0, 0.6}, {0.6, 1.2}}, "[[0,b],[b,d]]", 3, "+-0"},
      {"theta (a b;b 0)", n_theta, CMat{{0.9, 0.4}, {0.4, 0}}, "[[a,b],[b,0]]", 3, "+-0"},
      {"identity (a 0;0 d)", CMat::identity(2), CMat::diag({0.3, 0.7}), "[[a,0],[0,d]]", 2, "+-0"},
      {"hyperbolic (a 0;0 d)", hyp, CMat::diag({0.3, 2.0}), "[[a,0],[0,d]]", 2, "+-0"},
      {"hyperbolic (0 b;b 0)", hyp, CMat{{0, 0.7}, {0.7, 0}}, "[[0,b],[b,0]]", 1, "+"},
      {"hyperbolic (1 1;1 1)", hyp, CMat{{1, 1}, {1, 1}}, "[[1,1],[1,1]]", 0, "+"},
      {"swap (0 b;b 1)", n_swap, CMat{{0, 0.5}, {0.5, 1}}, "[[0,b],[b,1]]", 1, "+0"},
      {"swap (1 0;0 d)", n_swap, CMat::diag({1.0, cplx(0.3, 0.6)}), "[[1,0],[0,d]]", 2, "+"},
      {"tau (a b;b d)", n_tau, CMat{{ua, 0.7}, {0.7, cplx(0.3, -0.4)}}, "[[a,b],[b,d]]", 5, "+-0"},
      {"tau (0 b;b d)", n_tau, CMat{{0, 0.7}, {0.7, ud}}, "[[0,b],[b,d]]", 3, "+-0"},
      {"tau (0 b;b 0)", n_tau, CMat{{0, 0.7}, {0.7, 0}}, "[[0,b],[b,0]]", 2, "+-0"},
      {"tau (1 0;0 d)", n_tau, CMat::diag({1.0, cplx(0.2, 0.5)}), "[[1,0],[0,d]]", 3, "+0"},
      {"tau (0 0;0 1)", n_tau, CMat::diag({0.0, 1.0}), "[[0,0],[0,1]]", 1, "+"},
      {"tau zero P", n_tau, zero, "[[0,0],[0,0]]", 1, "+"},
      {"nilpotent (a b;b 1)", n_tau0, CMat{{cplx(0.4, 0.3), 0.6}, {0.6, 1}}, "[[a,b],[b,1]]", 3, "+-0"},
      {"nilpotent (1 b;b 0)", n_tau0, CMat{{1, 0.6}, {0.6, 0}}, "[[1,b],[b,0]]", 1, "+-0"},
      {"nilpotent (0 b;b 0)", n_tau0, CMat{{0, 0.6}, {0.6, 0}}, "[[0,b],[b,0]]", 1, "+-0"},
      {"nilpotent (a 0;0 1)", n_tau0, CMat::diag({0.5, 1.0}), "[[a,0],[0,1]]", 1, "+0"},
      {"nilpotent (1 0;0 0)", n_tau0, e11, "[[1,0],[0,0]]", 0, "0"},
      {"nilpotent zero P", n_tau0, zero, "[[0,0],[0,0]]", 0, "0"},
      {"cusp (a 0;0 d)", n_cusp, CMat::diag({1.5, cplx(0.2, 0.3)}), "[[a,0],[0,d]]", 3, "+-0"},
      {"cusp (0 b;b 0)", n_cusp, CMat{{0, 0.6}, {0.6, 0}}, "[[0,b],[b,0]]", 1, "+0"},
      {"cusp (0 0;0 d)", n_cusp, CMat::diag({0.0, 0.9}), "[[0,0],[0,d]]", 1, "+"},
      {"rank one (a 0;0 1)", e11, CMat::diag({0.5, 1.0}), "[[a,0],[0,1]]", 1, "+-0"},
      {"rank one (0 1;1 0)", e11, CMat{{0, 1}, {1, 0}}, "[[0,1],[1,0]]", 0, "+"},
      {"rank one (a 0;0 0)", e11, CMat::diag({0.5, 0.0}), "[[a,0],[0,0]]", 1, "0"},
      {"zero R, P = I", zero, CMat::identity(2), "[[1,0],[0,1]]", 0, "+"},
      {"zero R, P = E11", zero, e11, "[[1,0],[0,0]]", 0, "0"},
      {"zero R, P = 0", zero, zero, "[[0,0],[0,0]]", 0, "0"},
  };
}

// Rows with exact rank, signature and sign columns.
inline std::vector<GoldenRow> example_rows() {
  const CMat id = CMat::identity(2);
  const CMat hyp = CMat::diag({1.0, -1.0});
  const CMat n_swap{{0, 1}, {1, 0}};
  const CMat e11 = CMat::diag({1.0, 0.0});
  const CMat zero = CMat::zeros(2, 2);
  auto d = [](double a, double b) { return CMat::diag({a, b}); };
  const std::string dg = "[[a,0],[0,d]]";
  auto row = [](std::string label, CMat n, CMat p, std::string shape, int rp, int rnp, int rg,
                int sg, std::string sign) {
    GoldenRow g{std::move(label), std::move(n), std::move(p), std::move(shape), -1, std::move(sign)};
    g.rho_P = rp;
    g.rho_NP = rnp;
    g.rho_Gamma = rg;
    g.sigma_Gamma = sg;
    return g;
  };
  return {
      row("definite P=0", id, zero, dg, 0, 2, 4, 4, "+"),
      row("definite (0,d<1)", id, d(0, 0.5), dg, 1, 2, 4, 4, "+"),
      row("definite (0,1)", id, d(0, 1), dg, 1, 2, 3, 3, "0"),
      row("definite (0,d>1)", id, d(0, 2), dg, 1, 2, 4, 2, "-"),
      row("definite (a,d<1)", id, d(0.3, 0.6), dg, 2, 2, 4, 4, "+"),
      row("definite (a,1)", id, d(0.4, 1), dg, 2, 2, 3, 3, "0"),
      row("definite (a<1<d)", id, d(0.5, 2), dg, 2, 2, 4, 2, "-"),
      row("definite P=I", id, id, dg, 2, 2, 2, 2, "0"),
      row("definite (1,d>1)", id, d(1, 3), dg, 2, 2, 3, 1, "0"),
      row("definite (1<a<d)", id, d(1.5, 2.5), dg, 2, 2, 4, 0, "+"),
      row("indefinite P=0", hyp, zero, dg, 0, 2, 4, 0, "+"),
      row("indefinite (0,d<1)", hyp, d(0, 0.5), dg, 1, 2, 4, 0, "+"),
      row("indefinite (0,1)", hyp, d(0, 1), dg, 1, 2, 3, 1, "0"),
      row("indefinite (0,d>1)", hyp, d(0, 2), dg, 1, 2, 4, 2, "-"),
      row("indefinite (a,d<1)", hyp, d(0.3, 0.6), dg, 2, 2, 4, 0, "+"),
      row("indefinite (a,1)", hyp, d(0.4, 1), dg, 2, 2, 3, 1, "0"),
      row("indefinite (a<1<d)", hyp, d(0.5, 2), dg, 2, 2, 4, 2, "-"),
      row("indefinite P=I", hyp, id, dg, 2, 2, 2, 0, "0"),
      row("indefinite (1,d>1)", hyp, d(1, 3), dg, 2, 2, 3, 1, "0"),
      row("indefinite (1<a<d)", hyp, d(1.5, 2.5), dg, 2, 2, 4, 0, "+"),
      row("indefinite (1 1;1 1)", hyp, CMat{{1, 1}, {1, 1}}, "[[1,1],[1,1]]", 1, 2, 4, 0, "+"),
      row("indefinite (0 b;b 0)", hyp, CMat{{0, 0.7}, {0.7, 0}}, "[[0,b],[b,0]]", 2, 2, 4, 0, "+"),
      row("swap (0 b;b 1)", n_swap, CMat{{0, 0.5}, {0.5, 1}}, "[[0,b],[b,1]]", 2, 2, 4, 0, "+"),
      row("swap (0 1;1 1)", n_swap, CMat{{0, 1}, {1, 1}}, "[[0,b],[b,1]]", 2, 2, 3, 1, "0"),
      row("swap (1 0;0 d)", n_swap, CMat::diag({1.0, cplx(0.3, 0.6)}), "[[1,0],[0,d]]", 2, 2, 4, 0, "+"),
      row("rank one (0,1)", e11, d(0, 1), "[[a,0],[0,1]]", 1, 2, 4, 2, "-"),
      row("rank one (a<1,1)", e11, d(0.5, 1), "[[a,0],[0,1]]", 2, 2, 4, 2, "-"),
      row("rank one (1,1)", e11, d(1, 1), "[[a,0],[0,1]]", 2, 2, 3, 1, "0"),
      row("rank one (a>1,1)", e11, d(2, 1), "[[a,0],[0,1]]", 2, 2, 4, 0, "+"),
      row("rank one (0 1;1 0)", e11, CMat{{0, 1}, {1, 0}}, "[[0,1],[1,0]]", 2, 2, 4, 0, "+"),
      row("rank one P=0", e11, zero, "[[a,0],[0,0]]", 0, 1, 2, 2, "0"),
      row("rank one (a<1,0)", e11, d(0.5, 0), "[[a,0],[0,0]]", 1, 1, 2, 2, "0"),
      row("rank one (1,0)", e11, d(1, 0), "[[a,0],[0,0]]", 1, 1, 1, 1, "0"),
      row("rank one (a>1,0)", e11, d(2, 0), "[[a,0],[0,0]]", 1, 1, 2, 0, "0"),
      row("zero R, P=I", zero, id, "[[1,0],[0,1]]", 2, 2, 4, 0, "+"),
      row("zero R, P=E11", zero, e11, "[[1,0],[0,0]]", 1, 1, 2, 0, "0"),
      row("zero R, P=0", zero, zero, "[[0,0],[0,0]]", 0, 0, 0, 0, "0"),
  };
}

inline std::vector<GoldenRow> golden_rows() {
  auto rows = table_rows();
  for (auto &r : example_rows()) rows.push_back(std::move(r));
  return rows;
}

} // namespace crsing::fixtures
