#include "minkval/geomcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "minkval/hull.hpp"
#include "minkval/quadrature.hpp"

namespace minkval {

Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vec unit_vec(int n, int axis) {
  Vec v = Vec::Zero(n);
  v(axis) = 1.0;
  return v;
}

Rotation::Rotation(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw GeometryError("rotation: matrix not square");
  const Mat gram = m_.transpose() * m_ - Mat::Identity(m_.rows(), m_.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-12) throw GeometryError("rotation: matrix not orthogonal");
  if (m_.determinant() <= 0) throw GeometryError("rotation: determinant not positive");
}

Rotation Rotation::identity(int n) { return Rotation(Mat::Identity(n, n)); }

Rotation Rotation::inverse() const { return Rotation(m_.transpose()); }

AffineFrame affine_frame(std::span<const Vec> points, double tol) {
  AffineFrame fr;
  const int n = static_cast<int>(points.front().size());
  fr.origin = points.front();
  fr.basis = Mat(n, 0);
  std::vector<Vec> dirs;
  while (static_cast<int>(dirs.size()) < n) {
    double best = tol;
    Vec best_r;
    for (const auto& p : points) {
      Vec r = p - fr.origin;
      for (const auto& b : dirs) r -= b.dot(r) * b;
      const double d = r.norm();
      if (d > best) {
        best = d;
        best_r = r;
      }
    }
    if (best <= tol) break;
    Vec b = best_r / best;
    for (const auto& q : dirs) b -= q.dot(b) * q;  // second Gram-Schmidt pass
    dirs.push_back(b.normalized());
  }
  fr.dim = static_cast<int>(dirs.size());
  fr.basis = Mat(n, fr.dim);
  for (int k = 0; k < fr.dim; ++k) fr.basis.col(k) = dirs[k];
  return fr;
}

Polytope convex_hull(std::span<const Vec> points) {
  if (points.empty()) throw GeometryError("convex_hull: no points");
  const int n = static_cast<int>(points.front().size());
  if (n < 1 || n > kMaxDim) throw GeometryError("convex_hull: unsupported dimension");
  for (const auto& p : points) {
    if (p.size() != n) throw GeometryError("convex_hull: dimension mismatch among points");
    if (!p.allFinite()) throw GeometryError("convex_hull: non-finite coordinate");
  }
  const double tol = hull::scaled_tolerance(points);
  const std::vector<Vec> pts = hull::dedupe(points, tol);

  Polytope poly;
  poly.ambient_ = n;
  poly.frame_ = affine_frame(pts, tol);
  const int k = poly.frame_.dim;
  if (k == 0) {
    poly.vertices_ = {pts.front()};
    poly.measure_ = 1.0;
    return poly;
  }
  if (k < n) {
    std::vector<Vec> local;
    local.reserve(pts.size());
    for (const auto& p : pts) local.push_back(poly.frame_.to_local(p));
    const hull::Result r = hull::full_hull(local, tol);
    for (int v : r.vertices) poly.vertices_.push_back(pts[v]);
    poly.measure_ = r.volume;
    return poly;
  }

  const hull::Result r = hull::full_hull(pts, tol);
  std::vector<int> index(pts.size(), -1);
  for (int v : r.vertices) {
    index[v] = static_cast<int>(poly.vertices_.size());
    poly.vertices_.push_back(pts[v]);
  }
  for (const auto& f : r.facets) {
    Facet out;
    out.normal = f.normal;
    out.offset = f.offset;
    out.area = f.area;
    for (int v : f.vertices) out.vertices.push_back(index[v]);
    std::sort(out.vertices.begin(), out.vertices.end());
    poly.facets_.push_back(std::move(out));
  }
  poly.measure_ = r.volume;
  return poly;
}

double Polytope::surface_area() const {
  double s = 0;
  for (const auto& f : facets_) s += f.area;
  return s;
}

Vec Polytope::vertex_centroid() const {
  Vec c = Vec::Zero(ambient_);
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

Vec Polytope::hyperplane_normal() const {
  if (dim() != ambient_ - 1) throw GeometryError("hyperplane_normal: body is not of codimension one");
  Vec best;
  double best_norm = -1;
  for (int k = 0; k < ambient_; ++k) {
    Vec e = unit_vec(ambient_, k);
    for (int c = 0; c < frame_.basis.cols(); ++c) e -= frame_.basis.col(c).dot(e) * frame_.basis.col(c);
    if (e.norm() > best_norm) {
      best_norm = e.norm();
      best = e;
    }
  }
  best.normalize();
  for (int k = 0; k < ambient_; ++k) {
    if (std::abs(best(k)) > 1e-12) {
      if (best(k) < 0) best = -best;
      break;
    }
  }
  return best;
}

Polytope Polytope::mapped(const Mat& rot, double s, const Vec& shift) const {
  if (s < 0) throw GeometryError("scale: negative factor");
  if (s == 0) {
    const std::vector<Vec> pt{shift};
    return convex_hull(pt);
  }
  Polytope out;
  out.ambient_ = ambient_;
  out.vertices_.reserve(vertices_.size());
  for (const auto& v : vertices_) out.vertices_.push_back(s * (rot * v) + shift);
  out.facets_ = facets_;
  for (auto& f : out.facets_) {
    f.normal = rot * f.normal;
    f.offset = s * f.offset + f.normal.dot(shift);
    f.area *= std::pow(s, ambient_ - 1);
  }
  out.frame_.origin = s * (rot * frame_.origin) + shift;
  out.frame_.basis = rot * frame_.basis;
  out.frame_.dim = frame_.dim;
  out.measure_ = measure_ * std::pow(s, frame_.dim);
  return out;
}

double support(std::span<const Vec> vertices, const Vec& u) {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) h = std::max(h, v.dot(u));
  return h;
}

double support(const Polytope& p, const Vec& u) {
  if (u.isZero(0)) return 0.0;
  return support(p.vertices(), u);
}

Polytope apply_rotation(const Polytope& p, const Rotation& r) {
  if (r.dim() != p.ambient_dim()) throw GeometryError("apply_rotation: dimension mismatch");
  return p.mapped(r.matrix(), 1.0, Vec::Zero(p.ambient_dim()));
}

Polytope translate(const Polytope& p, const Vec& t) {
  const int n = p.ambient_dim();
  return p.mapped(Mat::Identity(n, n), 1.0, t);
}

Polytope scale(const Polytope& p, double lambda) {
  if (lambda < 0) throw GeometryError("scale: negative factor");
  const int n = p.ambient_dim();
  return p.mapped(Mat::Identity(n, n), lambda, Vec::Zero(n));
}

Polytope reflect(const Polytope& p) {
  const int n = p.ambient_dim();
  return p.mapped(-Mat::Identity(n, n), 1.0, Vec::Zero(n));
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim()) throw GeometryError("minkowski_sum: dimension mismatch");
  std::vector<Vec> pts;
  pts.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices())
    for (const auto& b : q.vertices()) pts.push_back(a + b);
  return convex_hull(pts);
}

double volume(const Polytope& p) { return p.volume(); }

Mat orthogonal_complement(const Vec& u) {
  const int n = static_cast<int>(u.size());
  Mat a(n, 1);
  a.col(0) = u;
  Eigen::HouseholderQR<Mat> qr(a);
  const Mat q = qr.householderQ();
  return q.rightCols(n - 1);
}

double projection_volume(const Polytope& p, const Vec& u) {
  const double nu = u.norm();
  if (nu == 0) throw GeometryError("projection_volume: zero direction");
  const Mat basis = orthogonal_complement(u / nu);
  std::vector<Vec> shadow;
  shadow.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) shadow.push_back(basis.transpose() * v);
  const double tol = hull::scaled_tolerance(shadow);
  int dim = 0;
  const double vol = hull::affine_measure(hull::dedupe(shadow, tol), tol, &dim);
  return dim == p.ambient_dim() - 1 ? vol : 0.0;
}

Split split_by_hyperplane(const Polytope& p, const Vec& normal, double c) {
  if (!p.full_dimensional()) throw GeometryError("split_by_hyperplane: body is not full-dimensional");
  const double tol = hull::scaled_tolerance(p.vertices()) * normal.norm();
  std::vector<double> s;
  for (const auto& v : p.vertices()) s.push_back(normal.dot(v) - c);
  const bool below = std::any_of(s.begin(), s.end(), [&](double x) { return x < -tol; });
  const bool above = std::any_of(s.begin(), s.end(), [&](double x) { return x > tol; });
  if (!below || !above) throw GeometryError("split_by_hyperplane: hyperplane misses the interior");

  std::vector<Vec> lo, hi, mid;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec& v = p.vertices()[i];
    if (s[i] <= tol) lo.push_back(v);
    if (s[i] >= -tol) hi.push_back(v);
    if (std::abs(s[i]) <= tol) mid.push_back(v);
  }
  for (const auto& e : faces(p, 1)) {
    const int i = e[0], j = e[1];
    if ((s[i] < -tol && s[j] > tol) || (s[i] > tol && s[j] < -tol)) {
      const double t = s[i] / (s[i] - s[j]);
      const Vec x = p.vertices()[i] + t * (p.vertices()[j] - p.vertices()[i]);
      lo.push_back(x);
      hi.push_back(x);
      mid.push_back(x);
    }
  }
  return {convex_hull(lo), convex_hull(hi), convex_hull(mid)};
}

std::vector<std::vector<int>> faces(const Polytope& p, int k) {
  const int n = p.ambient_dim();
  if (!p.full_dimensional()) throw GeometryError("faces: body is not full-dimensional");
  if (k < 0 || k > n) throw GeometryError("faces: face dimension out of range");
  std::vector<int> all(p.vertices().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  if (k == n) return {all};

  std::set<std::vector<int>> level;
  for (const auto& f : p.facets()) level.insert(f.vertices);
  const double tol = hull::scaled_tolerance(p.vertices());
  for (int d = n - 1; d > k; --d) {
    std::set<std::vector<int>> next;
    for (const auto& face : level) {
      std::vector<Vec> pts;
      for (int v : face) pts.push_back(p.vertices()[v]);
      const AffineFrame fr = affine_frame(pts, tol);
      std::vector<Vec> local;
      for (const auto& q : pts) local.push_back(fr.to_local(q));
      const hull::Result r = hull::full_hull(local, tol);
      for (const auto& sub : r.facets) {
        std::vector<int> ids;
        for (int v : sub.vertices) ids.push_back(face[v]);
        std::sort(ids.begin(), ids.end());
        next.insert(std::move(ids));
      }
    }
    level = std::move(next);
  }
  return {level.begin(), level.end()};
}

DirectionGrid sphere_grid(int n, int resolution) {
  if (resolution < 2) throw GeometryError("sphere_grid: resolution must be at least 2");
  DirectionGrid g;
  g.symmetric = true;
  const int az = 2 * resolution;
  const double two_pi = 2.0 * std::numbers::pi;
  if (n == 3) {
    const QuadratureRule z = gauss_legendre(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double r = std::sqrt(1.0 - z.nodes[i] * z.nodes[i]);
      for (int j = 0; j < az; ++j) {
        const double phi = two_pi * (j + 0.5) / az;
        g.directions.push_back(make_vec({r * std::cos(phi), r * std::sin(phi), z.nodes[i]}));
        g.weights.push_back(0.5 * z.weights[i] / az);
      }
    }
  } else if (n == 4) {
    const QuadratureRule t = gauss_legendre(resolution, 0.0, 1.0);
    for (int i = 0; i < resolution; ++i) {
      const double r1 = std::sqrt(t.nodes[i]);
      const double r2 = std::sqrt(1.0 - t.nodes[i]);
      for (int j = 0; j < az; ++j) {
        const double a = two_pi * (j + 0.5) / az;
        for (int k = 0; k < az; ++k) {
          const double b = two_pi * (k + 0.5) / az;
          g.directions.push_back(
              make_vec({r1 * std::cos(a), r1 * std::sin(a), r2 * std::cos(b), r2 * std::sin(b)}));
          g.weights.push_back(t.weights[i] / (az * az));
        }
      }
    }
  } else {
    throw GeometryError("sphere_grid: only n = 3 and n = 4 are supported");
  }
  return g;
}

double hausdorff_distance(const Polytope& p, const Polytope& q, const DirectionGrid& grid) {
  if (grid.directions.empty()) throw GeometryError("hausdorff_distance: empty grid");
  double d = 0;
  for (const auto& u : grid.directions) d = std::max(d, std::abs(support(p, u) - support(q, u)));
  return d;
}

Vec random_gaussian(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

Vec random_unit_vector(Rng& rng, int n) {
  for (;;) {
    const Vec v = random_gaussian(rng, n);
    const double nv = v.norm();
    if (nv > 1e-6) return v / nv;
  }
}

Rotation random_rotation(Rng& rng, int n) {
  Mat a(n, n);
  for (int c = 0; c < n; ++c) a.col(c) = random_gaussian(rng, n);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c)
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  // One Newton-Schulz polish step keeps the orthogonality residual near eps.
  q = 0.5 * q * (3.0 * Mat::Identity(n, n) - q.transpose() * q);
  return Rotation(q);
}

Rotation random_rotation(std::uint64_t seed, int n) {
  Rng rng(seed);
  return random_rotation(rng, n);
}

Polytope random_polytope(Rng& rng, int n, int m) {
  if (m < n + 1) throw GeometryError("random_polytope: need at least n+1 points");
  for (;;) {
    std::vector<Vec> pts;
    pts.reserve(m);
    for (int i = 0; i < m; ++i) pts.push_back(random_gaussian(rng, n));
    Polytope p = convex_hull(pts);
    if (p.full_dimensional()) return p;
  }
}

Polytope random_polytope(std::uint64_t seed, int n, int m) {
  Rng rng(seed);
  return random_polytope(rng, n, m);
}

}  // namespace minkval
