#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crsing/normalform.hpp"
#include "crsing/series.hpp"

namespace crsing {

// coef * sqrt(radicand), principal branch. The radicand is a polynomial in
// (z1, z2, conj z1, conj z2) stored as a PSeries with nvars = 2.
struct RootTerm {
  cplx coef = 1.0;
  PSeries radicand;
};

// A graph chart z3 = F(z, conj z) over a box in the (z1, z2) base, with
// F = num / den + sum of root terms.
struct Chart {
  std::string id;
  PSeries num, den;
  std::vector<RootTerm> roots;
  // (Re z1, Im z1, Re z2, Im z2) bounds.
  std::array<double, 4> lo{-4, -4, -4, -4}, hi{4, 4, 4, 4};
  int orientation = +1; // relative to the complex orientation of the base
  // Restricts the search to z1 = pin (an added equation; the system becomes
  // overdetermined and is solved by Gauss-Newton in z2).
  std::optional<cplx> pin_z1;
  // Closed-form locations a polished root snaps to when within 1e-6.
  std::vector<std::array<cplx, 2>> exact_points;
  // Point in the target space from (z1, z2, F); empty means (z1, z2, F).
  std::function<std::vector<cplx>(cplx, cplx, cplx)> ambient;
};

// Taylor data of F at a base point as a series in (w, conj w), w = z - point.
PSeries chart_taylor(const Chart &chart, cplx z1, cplx z2, int order);
// Plain evaluation of F; throws DenominatorVanishes or BadParams outside the
// chart's valid region.
cplx chart_eval(const Chart &chart, cplx z1, cplx z2);
// Whether (z1, z2) is usable: denominator nonzero and every radicand outside
// the 1e-6 collar of its branch cut.
bool chart_valid(const Chart &chart, cplx z1, cplx z2);
// max_k |dF / d conj z_k|.
double wirtinger_residual(const Chart &chart, cplx z1, cplx z2);

struct CRLocation {
  cplx z1, z2;
  double residual = 0.0;
  bool on_boundary = false;
  bool snapped = false;
};

struct SearchResult {
  std::vector<CRLocation> points; // sorted lexicographically
  bool identically_critical = false;
  int seeds = 0;
  int skipped = 0;         // seeds outside the valid region
  int no_convergence = 0;  // per-seed failures
  int outside = 0;         // converged outside the box
};

SearchResult find_cr_points(const Chart &chart, int seeds_per_axis);

// Standard-position series at a CR location: Taylor expansion to degree 3,
// constant removed, holomorphic linear part sheared into z3.
PSeries local_model(const Chart &chart, cplx z1, cplx z2);

enum class Orientation { Plus, Minus };
const char *orientation_name(Orientation o);

enum class PointIndex { Plus, Minus, Degenerate };
int index_value(PointIndex i);
const char *index_name(PointIndex i);

PointIndex point_index(const PSeries &model, Orientation orientation);
// The model with z1 and conj z1 exchanged.
PSeries conjugate_first(const PSeries &model);

struct Topology {
  enum class Target { C3, CP3 } target = Target::C3;
  int chi = 0;
  int p1 = 0;     // C3 targets
  int degree = 0; // CP3 targets
};

struct ChartedManifold {
  std::string name;
  std::vector<Chart> charts;
  bool projective = false; // ambient points are homogeneous coordinates
  std::optional<Topology> expected_topology;
};

// Distance used to identify points found in different charts.
double ambient_distance(const ChartedManifold &m, const std::vector<cplx> &a,
                        const std::vector<cplx> &b);

struct CRPoint {
  std::string chart;
  cplx z1, z2;
  std::vector<cplx> ambient;
  Orientation orientation = Orientation::Plus;
  PointIndex index = PointIndex::Degenerate;
  TableRow row;
  PSeries model;
  double residual = 0.0;
  bool on_boundary = false;
  bool snapped = false;
};

enum class Convention { Lai, Switched };

struct EnumerateOptions {
  int seeds_per_axis = 12;
  Convention convention = Convention::Lai;
};

struct Enumeration {
  std::vector<CRPoint> points;
  int I_plus = 0;
  int I_minus = 0;
  int degenerate = 0;
  bool general_position = true;
  bool identically_critical = false;
  int no_convergence = 0;
  int boundary = 0;
  std::vector<std::string> warnings;
};

Enumeration enumerate(const ChartedManifold &m, const EnumerateOptions &opt = {});

struct TopologyReport {
  bool pass = false;
  int expected_sum = 0, expected_diff = 0; // I+ + I-, I+ - I-
  int sum = 0, diff = 0;
  std::vector<std::string> mismatches;
};

TopologyReport topology_check(const ChartedManifold &m, int I_plus, int I_minus,
                              Convention convention = Convention::Lai);

ChartedManifold s4_ellipsoid(const std::array<double, 5> &d);
ChartedManifold s2xs2(const std::array<double, 6> &p);
ChartedManifold cp2_iota(double t);
// name in {s4_ellipsoid, s2xs2, cp2_iota} (short forms s4, cp2 accepted).
ChartedManifold builtin(const std::string &name, const std::vector<double> &params);

} // namespace crsing
