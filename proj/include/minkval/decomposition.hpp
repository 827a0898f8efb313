#pragma once

// Homogeneous decomposition of a translation-invariant Minkowski valuation:
// evaluate on the dilates mK, m = 1..n+1, and solve the Vandermonde system
// h(Phi(mK), u) = sum_j m^j f_j(K, u) for the components f_j.

#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "minkval/geomcore.hpp"
#include "minkval/operators.hpp"

namespace minkval {

/// a(j, m-1) with sum_m a(j, m-1) m^i = delta_ij, i, j = 0..n.
struct VandermondeCoefficients {
  int n = 0;
  Eigen::MatrixXd a;

  /// max_ij |sum_m a_jm m^i - delta_ij|.
  double identity_residual() const;
};

/// Inverse of V_{mi} = m^i by Gaussian elimination with partial pivoting in
/// long double. Throws std::invalid_argument unless 1 <= n <= 6.
VandermondeCoefficients vandermonde_coefficients(int n);

/// f_j(K, .) as a callable: re-evaluates the dilate oracles at any vector.
class ComponentOracle {
 public:
  ComponentOracle(const OperatorHandle& phi, const Polytope& k);

  int dim() const { return n_; }
  double operator()(int j, const Vec& u) const;
  /// h(Phi K, u), the undecomposed value.
  double total(const Vec& u) const { return dilates_.front()(u); }
  const VandermondeCoefficients& coefficients() const { return coeff_; }

 private:
  int n_;
  std::vector<SupportFunction> dilates_; // m = 1..n+1
  VandermondeCoefficients coeff_;
};

struct DegreeComponent {
  int degree = 0;
  std::vector<double> values; // on the grid
  double norm = 0;            // sup over the grid
  double max_violation = 0;   // sublinearity
  bool sublinear = false;
  bool homogeneous = true;    // positive homogeneity holds by construction
};

struct HomogeneousDecomposition {
  int n = 0;
  DirectionGrid grid;
  std::vector<double> measured; // h(Phi K, u) on the grid
  std::vector<DegreeComponent> components; // degree 0..n
  double reconstruction_residual = 0;
};

struct DecomposeOptions {
  double tau_sub = 1e-6;    // relative to max |f_j| over the grid
  int sublinearity_pairs = 2000;
  std::uint64_t seed = 1;
};

/// Pairs of grid directions for the sublinearity test.
std::vector<std::pair<Vec, Vec>> sample_pairs(const DirectionGrid& grid, int count, std::uint64_t seed);

/// max over pairs of f(u1 + u2) - f(u1) - f(u2); f is evaluated at the
/// unnormalized sum.
double sublinearity_check(const std::function<double(const Vec&)>& f, const std::vector<std::pair<Vec, Vec>>& pairs);

HomogeneousDecomposition decompose(const OperatorHandle& phi, const Polytope& k, const DirectionGrid& grid,
                                   const DecomposeOptions& opt = {});

class NotASupportFunction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outer approximation {x : <u, x> <= f(u) for all grid u}, computed as the
/// polar of the hull of u / (f(u) - <c, u>) around the grid Steiner point c.
/// Directions where the body is flat within `flat_tol` (relative) are
/// thickened by that amount, so lower-dimensional bodies come out as thin
/// slabs. Converges to the true body as the grid is refined.
Polytope body_from_support(const std::vector<double>& values, const DirectionGrid& grid, double flat_tol = 1e-9);

/// body_from_support for one decomposition component. Throws
/// NotASupportFunction if the component failed the sublinearity test.
Polytope component_to_body(const DegreeComponent& c, const DirectionGrid& grid);

/// Polytopality probe: exposed points grad h(u) are estimated by central
/// differences of the oracle on a grid and reduced to extreme points. The
/// hull is then refined by querying h on its facet normals until it matches
/// h there (a containment certificate) or the point count exceeds a cap, as
/// it does for smooth bodies. The result is also checked on random directions.
struct PolytopalVerdict {
  int grid_vertices = 0;      // extreme points seen on the grid
  int vertices = 0;           // after refinement
  int rounds = 0;
  double certificate_gap = 0; // max h(u) - offset over the final facet normals
  double fit_residual = 0;    // max |h(u) - h(conv V, u)| on test directions
  double scale = 1;           // max(1, max |h| on the grid); tolerances are relative to it
  bool certified = false;
  bool polytopal = false;
};
PolytopalVerdict polytopal_probe(const SupportFunction& h, int n, int resolution = 10, double tol = 1e-6,
                                 std::uint64_t seed = 7);

/// Least-squares recovery of (c1, c2, c3) for composite operators:
/// f_{n-1} against h(Pi K, .), and the even and odd parts of f_1 against
/// those of h(K - s(K), .).
struct CompositeFit {
  double c1 = 0, c2 = 0, c3 = 0;
};
CompositeFit fit_composite(const HomogeneousDecomposition& d, const Polytope& k);

}  // namespace minkval
