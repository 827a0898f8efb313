#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "minkval/hull.hpp"
#include "minkval/kernels.hpp"
#include "minkval/operators.hpp"
#include "minkval/quadrature.hpp"

namespace minkval {
namespace {

constexpr double kPi = std::numbers::pi;

// Signed solid angle of the spherical triangle spanned by unit vectors
// (Van Oosterom-Strackee); positive for counter-clockwise orientation.
double triangle_solid_angle(const Vec& a, const Vec& b, const Vec& c) {
  const Eigen::Vector3d x = a.head<3>(), y = b.head<3>(), z = c.head<3>();
  const double num = x.dot(y.cross(z));
  const double den = 1.0 + x.dot(y) + y.dot(z) + z.dot(x);
  return 2.0 * std::atan2(num, den);
}

// Duffy-collapsed Gauss-Legendre cubature of (1+|y|^2)^-2 over a tetrahedron.
double tet_integral(const std::array<Eigen::Vector3d, 4>& t, const QuadratureRule& g) {
  const Eigen::Vector3d e1 = t[1] - t[0], e2 = t[2] - t[0], e3 = t[3] - t[0];
  const double jac = std::abs(e1.dot(e2.cross(e3)));
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double a = g.nodes[i];
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double b = g.nodes[j];
      for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double c = g.nodes[k];
        const Eigen::Vector3d y = t[0] + a * e1 + (1 - a) * b * e2 + (1 - a) * (1 - b) * c * e3;
        const double r2 = 1.0 + y.squaredNorm();
        s += g.weights[i] * g.weights[j] * g.weights[k] * (1 - a) * (1 - a) * (1 - b) / (r2 * r2);
      }
    }
  }
  return s * jac;
}

using Ray4 = Eigen::Vector4d;

// Normalized solid angle of the simplicial cone spanned by four unit rays in
// R^4. Each cone is integrated on its own central cross-section once every
// ray is within 45 degrees of the centre; wider cones, and cones whose rules
// disagree, are bisected along their longest edge.
double simplicial_cone(const std::array<Ray4, 4>& r, const QuadratureRule& lo, const QuadratureRule& hi, int depth) {
  Vec c = (r[0] + r[1] + r[2] + r[3]).normalized();
  double closest = 1;
  for (int i = 0; i < 4; ++i) closest = std::min(closest, r[i].dot(c));
  // A ray at or beyond 90 degrees would land on the wrong sheet of the
  // section, so the quadrature is only attempted for narrow cones.
  if (closest > std::numbers::sqrt2 / 2 || depth >= 40) {
    const Mat basis = orthogonal_complement(c);
    std::array<Eigen::Vector3d, 4> t;
    for (int i = 0; i < 4; ++i) {
      const Vec ri = r[i];
      t[i] = (basis.transpose() * (ri / ri.dot(c))).head<3>();
    }
    const double coarse = tet_integral(t, lo);
    const double fine = tet_integral(t, hi);
    if (depth >= 40 || std::abs(fine - coarse) < 1e-10) return fine;
  }
  int a = 0, b = 1;
  double best = 2;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (r[i].dot(r[j]) < best) best = r[i].dot(r[j]), a = i, b = j;
  const Ray4 m = (r[a] + r[b]).normalized();
  std::array<Ray4, 4> left = r, right = r;
  left[a] = m;
  right[b] = m;
  return simplicial_cone(left, lo, hi, depth + 1) + simplicial_cone(right, lo, hi, depth + 1);
}

// Unit direction c with <r, c> > 0 for every ray. `start` is v - x0 for the
// vertex v and an interior point x0, which already qualifies: <n_f, v - x0> =
// h_f - <n_f, x0> > 0; the ray mean is used instead when its margin is larger.
// Perceptron pushes towards the worst ray then widen the smallest margin, and
// the best direction seen is kept.
Vec interior_direction(const std::vector<Vec>& rays, const Vec& start) {
  auto margin = [&](const Vec& c) {
    double m = 2;
    for (const auto& r : rays) m = std::min(m, r.dot(c));
    return m;
  };
  Vec mean = Vec::Zero(start.size());
  for (const auto& r : rays) mean += r;
  Vec c = start.normalized();
  if (mean.norm() > 0 && margin(mean.normalized()) > margin(c)) c = mean.normalized();
  Vec best = c;
  double best_margin = margin(c);
  for (int it = 0; it < 10000 && best_margin < 0.05; ++it) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < rays.size(); ++i)
      if (rays[i].dot(c) < rays[worst].dot(c)) worst = i;
    c = (c + 0.1 * rays[worst]).normalized();
    const double m = margin(c);
    if (m > best_margin) best = c, best_margin = m;
  }
  if (best_margin <= 1e-12) throw GeometryError("external angle: normal cone is not pointed");
  return best;
}

// Fraction of the sphere S^{d-1} covered by the pointed cone spanned by `rays`.
double cone_fraction(const std::vector<Vec>& rays, int d, const Vec& start) {
  if (d == 1) return 0.5;
  if (d == 2) {
    double best = 0;
    for (std::size_t i = 0; i < rays.size(); ++i)
      for (std::size_t j = i + 1; j < rays.size(); ++j)
        best = std::max(best, std::acos(std::clamp(rays[i].dot(rays[j]), -1.0, 1.0)));
    return best / (2 * kPi);
  }

  if (d == 3) {
    // Azimuthal order needs a centre inside the cone itself (not merely
    // positive against every ray); the ray mean is one.
    Vec m = Vec::Zero(3);
    for (const auto& r : rays) m += r;
    m.normalize();
    const Mat basis = orthogonal_complement(m);
    std::vector<std::pair<double, int>> order;
    for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
      const Vec y = basis.transpose() * rays[i];
      order.push_back({std::atan2(y(1), y(0)), i});
    }
    std::sort(order.begin(), order.end());
    double omega = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      omega += triangle_solid_angle(m, rays[order[k].second], rays[order[(k + 1) % order.size()].second]);
    return std::abs(omega) / (4 * kPi);
  }

  const Vec c = interior_direction(rays, start);
  const Mat basis = orthogonal_complement(c);

  // d == 4: triangulate the cross-section {<x, c> = 1} and integrate the
  // solid-angle density (1 + |y|^2)^-2 over each tetrahedron.
  std::vector<Vec> section;
  for (const auto& r : rays) section.push_back(basis.transpose() * (r / r.dot(c)));
  const double tol = hull::scaled_tolerance(section);
  const hull::Result q = hull::full_hull(section, tol);
  Eigen::Vector3d z = Eigen::Vector3d::Zero();
  for (int v : q.vertices) z += section[v].head<3>();
  z /= static_cast<double>(q.vertices.size());

  static const QuadratureRule lo = gauss_legendre(5, 0.0, 1.0);
  static const QuadratureRule hi = gauss_legendre(8, 0.0, 1.0);
  auto lift = [&](const Eigen::Vector3d& y) -> Ray4 { return (c + basis * Vec(y)).normalized(); };
  double omega = 0;
  for (const auto& f : q.facets) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (int v : f.vertices) g += section[v].head<3>();
    g /= static_cast<double>(f.vertices.size());
    for (const auto& r : f.ridges) {
      // extreme pair of the ridge
      int a = r.members.front(), b = a;
      double best = -1;
      for (int i : r.members)
        for (int j : r.members) {
          const double dist = (section[i] - section[j]).norm();
          if (dist > best) best = dist, a = i, b = j;
        }
      const std::array<Ray4, 4> cone{lift(z), lift(g), lift(section[a].head<3>()), lift(section[b].head<3>())};
      omega += simplicial_cone(cone, lo, hi, 0);
    }
  }
  return omega / (2 * kPi * kPi);
}

Vec vertex_mean(const std::vector<Vec>& pts) {
  Vec m = Vec::Zero(pts.front().size());
  for (const auto& p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

}  // namespace

std::vector<double> external_angles(const Polytope& p) {
  const int k = p.dim();
  if (k == 0) return {1.0};
  if (k == 1) return {0.5, 0.5};
  if (p.full_dimensional()) {
    std::vector<std::vector<Vec>> rays(p.vertices().size());
    for (const auto& f : p.facets())
      for (int v : f.vertices) rays[v].push_back(f.normal);
    const Vec x0 = vertex_mean(p.vertices());
    std::vector<double> angles(rays.size());
    for (std::size_t v = 0; v < rays.size(); ++v) angles[v] = cone_fraction(rays[v], k, p.vertices()[v] - x0);
    return angles;
  }
  std::vector<Vec> local;
  for (const auto& v : p.vertices()) local.push_back(p.frame().to_local(v));
  const double tol = hull::scaled_tolerance(local);
  const hull::Result r = hull::full_hull(local, tol);

  // Polytope vertices are exactly the extreme points, so hull indices match.
  std::vector<std::vector<Vec>> rays(local.size());
  for (const auto& f : r.facets)
    for (int v : f.vertices) rays[v].push_back(f.normal);
  const Vec x0 = vertex_mean(local);
  std::vector<double> angles(local.size());
  for (std::size_t v = 0; v < local.size(); ++v) angles[v] = cone_fraction(rays[v], k, local[v] - x0);
  return angles;
}

Vec steiner_point_exact(const Polytope& p) {
  const std::vector<double> g = external_angles(p);
  Vec s = Vec::Zero(p.ambient_dim());
  for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * p.vertices()[i];
  return s;
}

Vec steiner_point(const Polytope& p, const DirectionGrid& grid) {
  if (!grid.symmetric) throw GeometryError("steiner_point: grid must be antipodally symmetric");
  if (grid.dim() != p.ambient_dim()) throw GeometryError("steiner_point: grid dimension mismatch");
  const std::vector<double> h = support_table(p.vertices(), grid.directions);
  return steiner_grid_sum(grid.directions, grid.weights, h);
}

Polytope trivial_map_I(const Polytope& p) { return translate(p, -steiner_point_exact(p)); }

Polytope trivial_map_negI(const Polytope& p) { return translate(reflect(p), steiner_point_exact(p)); }

}  // namespace minkval
