#pragma once

#include <string>

#include <json.hpp>

#include "crsing/locus.hpp"
#include "crsing/normalform.hpp"
#include "crsing/series.hpp"

namespace crsing {

using Json = nlohmann::json;

Json to_json(cplx z);
cplx cplx_from_json(const Json &j);

// {"rows", "cols", "re", "im"} in row-major order; "im" may be omitted.
// The reader also takes nested rows, e.g. [[1, {"re": 0, "im": 1}], [0, 2]].
Json to_json(const CMat &m);
CMat cmat_from_json(const Json &j, double tol = kDefaultTol);

// {"nvars", "trunc", "terms": [{"alpha", "beta", "re", "im"}, ...]}
Json to_json(const PSeries &h);
PSeries pseries_from_json(const Json &j);

Json to_json(const HoloChange &t);
Json to_json(const TableRow &row);
Json to_json(const Topology &t);
Json to_json(const TopologyReport &r);
Json to_json(const CRPoint &p);
Json to_json(const Enumeration &e);

// Custom manifold manifest: {"name", "projective"?, "topology"?, "charts": [
//   {"id", "num", "den"?, "roots"?: [{"coef", "radicand"}], "box": [8 reals],
//    "orientation"?, "pin_z1"?}]}. Polynomials use the PSeries term format.
ChartedManifold manifold_from_json(const Json &j);

// Parses text, mapping every parse or schema failure to ParseError.
Json parse_json(const std::string &text);

// "a+bi" with 12 significant digits.
std::string format_cplx(cplx z);

} // namespace crsing
