#pragma once

// Discrete Minkowski problem: find the polytope whose facet areas are the
// weights of a given atomic measure, and the Blaschke sum built on it.

#include <stdexcept>
#include <vector>

#include "minkval/geomcore.hpp"
#include "minkval/measures.hpp"

namespace minkval {

struct SolverConfig {
  double tol_area = 1e-8;     // max relative facet-area residual
  int max_iter = 200;
  double damping = 1.0;       // initial Newton step length
  double regularization = 1e-12;
};

struct SolveReport {
  Polytope polytope;
  int iterations = 0;
  double final_residual = 0;
  bool converged = false;
  int restarts = 0;
};

class MinkowskiConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxSolverAtoms = 60;

/// Relative distance below which output vertices are merged. A vertex where
/// more than n facets meet splits into a cluster of size ~ tol_area * extent.
inline constexpr double kVertexSnap = 1e-6;

/// P(h) = {x : <u_i, x> <= h_i} with the data the Newton iteration needs.
struct HalfspaceBody {
  std::vector<Vec> vertices;
  std::vector<double> areas;  // facet (n-1)-volumes, zero for absent facets
  double volume = 0;
  /// Sparse Hessian of the volume: (i, j, dA_i/dh_j) for adjacent i != j.
  struct Coupling {
    int i, j;
    double value;
  };
  std::vector<Coupling> couplings;
};

HalfspaceBody evaluate_halfspaces(std::span<const Vec> normals, std::span<const double> h);

/// Max relative difference between the facet areas and central finite
/// differences of the volume in each h_i.
double gradient_consistency(std::span<const Vec> normals, std::span<const double> h, double step = 1e-6);

/// Damped Newton on the convex functional sum w_i h_i - W log V(P(h)), whose
/// critical points have facet areas proportional to w; the result is rescaled
/// and translated so that its Steiner point is the origin.
/// Throws MinkowskiConditionError if the measure is not centred or is
/// concentrated on a great subsphere, and std::invalid_argument on bad sizes.
SolveReport solve_minkowski(const DiscreteSphereMeasure& mu, const SolverConfig& cfg = {});

/// Body with S(P) + S(Q) as surface area measure, Steiner point at 0.
/// Throws GeometryError for lower-dimensional input and std::runtime_error
/// when the solver does not converge.
Polytope blaschke_sum(const Polytope& p, const Polytope& q, const SolverConfig& cfg = {});

}  // namespace minkval
