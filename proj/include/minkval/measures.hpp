#pragma once

// Surface area measures of polytopes as atomic measures on the sphere, and
// the first-order area measure of a 3-polytope as weighted great-circle arcs.

#include <vector>

#include "minkval/geomcore.hpp"

namespace minkval {

struct Atom {
  Vec u;
  double w = 0;
};

/// Finite positive measure on S^{n-1}; parallel atoms are merged.
class DiscreteSphereMeasure {
 public:
  explicit DiscreteSphereMeasure(int dim) : dim_(dim) {}

  /// Adds `w` at direction `u` (normalized), merging with a parallel atom.
  void add(const Vec& u, double w);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const;
  Vec centroid() const; // sum of w_i u_i

  DiscreteSphereMeasure scaled(double factor) const;
  DiscreteSphereMeasure rotated(const Rotation& r) const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

/// Parallel-atom tolerance on 1 - <u, v>.
inline constexpr double kAtomMergeTol = 1e-9;

/// One atom (normal, area) per facet. Throws GeometryError for lower-dimensional input.
DiscreteSphereMeasure surface_area_measure(const Polytope& p);

/// Limit of the surface area measure for bodies of any dimension: a body of
/// dimension n-1 with normal v gives atoms +v and -v of its (n-1)-volume;
/// smaller bodies give the zero measure.
DiscreteSphereMeasure surface_area_measure_limit(const Polytope& p);

struct MinkowskiVerdict {
  double centroid_residual = 0;
  double min_singular_value = 0;
  bool balanced = false;
  bool spanning = false;
  bool passed() const { return balanced && spanning; }
};

/// Centred (relative to total mass) and not concentrated on a great subsphere.
MinkowskiVerdict check_minkowski_conditions(const DiscreteSphereMeasure& mu, double tol = 1e-9);

DiscreteSphereMeasure merge_measures(const DiscreteSphereMeasure& a, const DiscreteSphereMeasure& b);

/// Minor great-circle arc a -> b carrying `density` per unit arc length.
struct Arc {
  Vec a;
  Vec b;
  double density = 0;

  double angle() const;
};

struct ArcMeasure3D {
  std::vector<Arc> arcs;
  double total_mass() const;
};

/// S_1(P, .) of a 3-polytope: one arc per edge between the normals of the two
/// adjacent facets, with density length/2. With this normalization S_1 of the
/// unit ball is spherical Lebesgue measure and the total mass is 2*pi times
/// the mean width.
inline constexpr double kArcDensityPerLength = 0.5;

ArcMeasure3D area_measure_order1_3d(const Polytope& p);

/// Integral of |<u, v>| over the arc with respect to arc length, in closed form.
double arc_abs_integral(const Arc& arc, const Vec& u);

}  // namespace minkval
