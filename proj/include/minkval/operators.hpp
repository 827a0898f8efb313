#pragma once

// Minkowski valuations as executable operators: projection body, the
// Steiner-point recentring maps K -> K - s(K) and K -> -K + s(K), their
// nonnegative combinations, kernel-defined Blaschke-Minkowski homomorphisms
// and the first-order projection body in R^3.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minkval/geomcore.hpp"
#include "minkval/measures.hpp"

namespace minkval {

/// center + sum of segments [-g, g].
struct Zonotope {
  std::vector<Vec> generators;
  Vec center;

  int dim() const { return static_cast<int>(center.size()); }
  double support(const Vec& u) const;
  /// Adds a generator, merging it into a parallel or antiparallel one.
  void add_generator(const Vec& g);
};

/// Generators area/2 * normal over facets. For bodies of dimension n-1 the
/// result is the segment with support V_{n-1}(P)|<u, v>|; smaller bodies map
/// to {0}.
Zonotope projection_body(const Polytope& p);

inline constexpr int kMaxZonotopeGenerators = 20;

/// Exact vertex enumeration from the cells of the generator hyperplane
/// arrangement. Throws GeometryError above kMaxZonotopeGenerators.
Polytope zonotope_to_polytope(const Zonotope& z);

/// Grid quadrature n * sum w_i h(P, u_i) u_i. Rejects asymmetric grids.
Vec steiner_point(const Polytope& p, const DirectionGrid& grid);

/// s(P) = sum over vertices of the external angle times the vertex, with
/// external angles integrated over each normal cone. Works in the affine
/// hull, so bodies of any dimension are accepted.
Vec steiner_point_exact(const Polytope& p);

/// Normalized external angle of every vertex, in vertex order.
std::vector<double> external_angles(const Polytope& p);

/// K - s(K).
Polytope trivial_map_I(const Polytope& p);
/// -K + s(K).
Polytope trivial_map_negI(const Polytope& p);

/// Support function of a body; accepts any vector and is positively
/// homogeneous in it.
using SupportFunction = std::function<double(const Vec&)>;

struct OperatorClaims {
  bool valuation = true;
  bool translation_invariant = true;
  bool rotation_equivariant = true;
  bool polytopal = true;
  /// Values depend on the Steiner point, so checks allow quadrature-level error.
  bool steiner_dependent = false;
  /// Claimed homogeneity degree as a function of the ambient dimension.
  std::function<std::optional<int>(int)> degree = [](int) { return std::nullopt; };
};

/// Black-box operator on polytopes, seen through the support functions of
/// its values. `bind` must be pure and the returned functions reentrant.
struct OperatorHandle {
  std::string name;
  std::function<SupportFunction(const Polytope&)> bind;
  OperatorClaims claims;

  SupportFunction apply(const Polytope& p) const { return bind(p); }
  double operator()(const Polytope& p, const Vec& u) const { return bind(p)(u); }
};

OperatorHandle projection_operator();
OperatorHandle identity_operator();     // I
OperatorHandle neg_identity_operator(); // -I
/// c1 Pi + c2 I + c3 (-I). Throws std::invalid_argument for negative weights.
OperatorHandle composite_operator(double c1, double c2, double c3);
/// Pointwise nonnegative combination of two handles (Minkowski sum of values).
OperatorHandle sum_operator(const OperatorHandle& a, const OperatorHandle& b);

/// Even kernel p and odd kernel q on [-1, 1].
struct KernelPair {
  std::function<double(double)> p;
  std::function<double(double)> q;
  std::string name;

  /// p(t) = |t| / 2, q = 0: reproduces the projection body.
  static KernelPair projection();
  static KernelPair zero();
  /// Barycentric interpolation of values at the Chebyshev points
  /// cos(k pi / (N-1)), k = 0..N-1 (ordered from +1 to -1).
  static KernelPair from_chebyshev(std::vector<double> p_values, std::vector<double> q_values);

  /// Max parity defect over `nodes` Chebyshev points.
  double parity_defect(int nodes = 64) const;
};

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// h(PsiP, u) = sum_i [p(<u,n_i>) + q(<u,n_i>)] area_i.
/// Throws KernelError if the kernels violate parity beyond 1e-12.
OperatorHandle bm_homomorphism(const KernelPair& k);

/// h(Pi_1 P, u) for a 3-polytope, unit u; arc integrals in closed form.
double projection_body_order1_3d(const Polytope& p, const Vec& u);
double projection_body_order1_3d(const ArcMeasure3D& s1, const Vec& u);
OperatorHandle projection_order1_operator();

}  // namespace minkval
