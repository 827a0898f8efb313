#pragma once

// Convex polytope geometry in R^3 and R^4: hulls, support functions,
// rigid motions, volumes, shadows and hyperplane splits.

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minkval {

inline constexpr int kMaxDim = 4;

/// Fixed-capacity vector; never allocates.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

/// Global geometric tolerance. Scaled by the extent of the point cloud
/// wherever absolute distances are compared.
inline double kGeoTol = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Vec make_vec(std::initializer_list<double> xs);
Vec unit_vec(int n, int axis);

/// Orthogonal matrix with determinant +1.
class Rotation {
 public:
  /// Throws GeometryError if `m` is not orthogonal to 1e-12 or has det <= 0.
  explicit Rotation(Mat m);
  static Rotation identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  Rotation inverse() const;
  Vec operator*(const Vec& v) const { return m_ * v; }

 private:
  Mat m_;
};

struct Facet {
  Vec normal;                // outward unit normal
  double offset = 0;         // h(P, normal)
  double area = 0;           // (n-1)-volume
  std::vector<int> vertices; // indices into Polytope::vertices()
};

/// Orthonormal frame of an affine subspace: points are origin + basis * y.
struct AffineFrame {
  Vec origin;
  Mat basis; // n x k, orthonormal columns
  int dim = 0;

  Vec to_local(const Vec& p) const { return basis.transpose() * (p - origin); }
  Vec to_global(const Vec& y) const { return origin + basis * y; }
};

/// Greedy farthest-point frame: every point lies within `tol` of the result.
AffineFrame affine_frame(std::span<const Vec> points, double tol);

/// Convex polytope given by its extreme points. Facets are cached when the
/// polytope is full-dimensional. Immutable after construction.
class Polytope {
 public:
  Polytope() = default;

  int ambient_dim() const { return ambient_; }
  int dim() const { return frame_.dim; }
  bool full_dimensional() const { return dim() == ambient_; }

  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const AffineFrame& frame() const { return frame_; }

  /// n-volume; zero for lower-dimensional bodies.
  double volume() const { return full_dimensional() ? measure_ : 0.0; }
  /// dim()-dimensional volume inside the affine hull (1 for a point).
  double affine_volume() const { return measure_; }
  double surface_area() const;
  Vec vertex_centroid() const;

  /// Unit normal of the affine hull when dim() == ambient_dim() - 1.
  Vec hyperplane_normal() const;

  /// Image under x -> scale * R x + shift, with caches carried along.
  Polytope mapped(const Mat& rot, double scale, const Vec& shift) const;

 private:
  friend Polytope convex_hull(std::span<const Vec> points);

  int ambient_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
  AffineFrame frame_;
  double measure_ = 0;
};

Polytope convex_hull(std::span<const Vec> points);
inline Polytope convex_hull(const std::vector<Vec>& points) {
  return convex_hull(std::span<const Vec>(points));
}

double support(const Polytope& p, const Vec& u);
double support(std::span<const Vec> vertices, const Vec& u);

Polytope apply_rotation(const Polytope& p, const Rotation& r);
Polytope translate(const Polytope& p, const Vec& t);
/// Throws GeometryError for negative factors.
Polytope scale(const Polytope& p, double lambda);
Polytope reflect(const Polytope& p);
Polytope minkowski_sum(const Polytope& p, const Polytope& q);

double volume(const Polytope& p);

/// (n-1)-volume of the orthogonal projection onto u-perp.
double projection_volume(const Polytope& p, const Vec& u);

/// Orthonormal basis (as columns) of the orthogonal complement of u.
Mat orthogonal_complement(const Vec& u);

struct Split {
  Polytope lower;        // P ∩ {<a,x> <= c}
  Polytope upper;        // P ∩ {<a,x> >= c}
  Polytope intersection; // P ∩ {<a,x> == c}
};

/// Throws GeometryError if the hyperplane misses the interior of P.
Split split_by_hyperplane(const Polytope& p, const Vec& normal, double c);

/// Vertex index sets of all k-faces. Requires a full-dimensional polytope.
std::vector<std::vector<int>> faces(const Polytope& p, int k);

/// Finite direction set on the unit sphere with quadrature weights.
struct DirectionGrid {
  std::vector<Vec> directions;
  std::vector<double> weights;
  bool symmetric = false;

  int dim() const { return directions.empty() ? 0 : static_cast<int>(directions.front().size()); }
  std::size_t size() const { return directions.size(); }
};

/// Antipodally symmetric product grid with probability weights.
/// n = 3: `resolution` Gauss-Legendre nodes in z times 2*resolution azimuths.
/// n = 4: Hopf coordinates with Gauss-Legendre in cos^2 and two azimuths.
DirectionGrid sphere_grid(int n, int resolution);

/// Max over the grid of |h(P,u) - h(Q,u)|; a lower bound of the Hausdorff
/// distance that converges to it as the grid is refined.
double hausdorff_distance(const Polytope& p, const Polytope& q, const DirectionGrid& grid);

using Rng = std::mt19937_64;

/// Haar-distributed rotation: QR of a Gaussian matrix, signs fixed so det = +1.
Rotation random_rotation(Rng& rng, int n);
Rotation random_rotation(std::uint64_t seed, int n = 3);
/// Hull of m Gaussian points, resampled until full-dimensional.
Polytope random_polytope(Rng& rng, int n, int m);
Polytope random_polytope(std::uint64_t seed, int n, int m);
Vec random_unit_vector(Rng& rng, int n);
Vec random_gaussian(Rng& rng, int n);

}  // namespace minkval
