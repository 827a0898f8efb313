#pragma once

// JSON and OFF readers/writers. Readers validate shape and throw InputError
// with a one-line diagnostic; writers emit shortest round-trip doubles, so
// every written document reads back to identical values.
//
//   polytope  {"dim": n, "vertices": [[x, ...], ...]}
//   measure   {"dim": n, "atoms": [{"u": [...], "w": w}, ...]}
//   zonotope  {"dim": n, "center": [...], "generators": [[...], ...]}
//   kernel    {"name": "projection" | "zero"} or
//             {"cheb_p": [...], "cheb_q": [...]}  (values at Chebyshev points)

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "minkval/decomposition.hpp"
#include "minkval/harness.hpp"
#include "minkval/measures.hpp"
#include "minkval/minkowski_solver.hpp"
#include "minkval/operators.hpp"

namespace minkval::io {

using Json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
/// Parses JSON text; `what` names the source in diagnostics.
Json parse_json(const std::string& text, const std::string& what);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, int dim, const std::string& what);

Json polytope_to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j);

Json measure_to_json(const DiscreteSphereMeasure& mu);
DiscreteSphereMeasure measure_from_json(const Json& j);

Json zonotope_to_json(const Zonotope& z);
Zonotope zonotope_from_json(const Json& j);

KernelPair kernel_from_json(const Json& j);

Json report_to_json(const SuiteReport& r);
Json decomposition_to_json(const HomogeneousDecomposition& d, const CompositeFit* fit = nullptr);
Json solve_report_to_json(const SolveReport& r);

/// OFF for n = 3: vertices and facet polygons (counter-clockwise seen from
/// outside). Reading takes the hull of the listed vertices.
std::string polytope_to_off(const Polytope& p);
Polytope polytope_from_off(const std::string& text);

/// By extension: ".off" reads OFF, anything else polytope JSON.
Polytope load_polytope(const std::string& path);

}  // namespace minkval::io
