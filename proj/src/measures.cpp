#include "minkval/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace minkval {

void DiscreteSphereMeasure::add(const Vec& u, double w) {
  if (u.size() != dim_) throw GeometryError("measure: atom dimension mismatch");
  if (!(w > 0)) throw GeometryError("measure: atom weights must be positive");
  const Vec dir = u.normalized();
  for (auto& a : atoms_) {
    if (1.0 - a.u.dot(dir) < kAtomMergeTol) {
      a.w += w;
      return;
    }
  }
  atoms_.push_back({dir, w});
}

double DiscreteSphereMeasure::total_mass() const {
  double m = 0;
  for (const auto& a : atoms_) m += a.w;
  return m;
}

Vec DiscreteSphereMeasure::centroid() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& a : atoms_) c += a.w * a.u;
  return c;
}

DiscreteSphereMeasure DiscreteSphereMeasure::scaled(double factor) const {
  DiscreteSphereMeasure out(dim_);
  out.atoms_ = atoms_;
  for (auto& a : out.atoms_) a.w *= factor;
  return out;
}

DiscreteSphereMeasure DiscreteSphereMeasure::rotated(const Rotation& r) const {
  DiscreteSphereMeasure out(dim_);
  out.atoms_ = atoms_;
  for (auto& a : out.atoms_) a.u = r * a.u;
  return out;
}

DiscreteSphereMeasure surface_area_measure(const Polytope& p) {
  if (!p.full_dimensional()) throw GeometryError("surface_area_measure: body is not full-dimensional");
  DiscreteSphereMeasure mu(p.ambient_dim());
  for (const auto& f : p.facets()) mu.add(f.normal, f.area);
  return mu;
}

DiscreteSphereMeasure surface_area_measure_limit(const Polytope& p) {
  const int n = p.ambient_dim();
  if (p.dim() == n) return surface_area_measure(p);
  DiscreteSphereMeasure mu(n);
  if (p.dim() == n - 1 && p.affine_volume() > 0) {
    const Vec v = p.hyperplane_normal();
    mu.add(v, p.affine_volume());
    mu.add(-v, p.affine_volume());
  }
  return mu;
}

MinkowskiVerdict check_minkowski_conditions(const DiscreteSphereMeasure& mu, double tol) {
  MinkowskiVerdict v;
  const int n = mu.dim();
  v.centroid_residual = mu.centroid().norm();
  v.balanced = v.centroid_residual < tol * std::max(1.0, mu.total_mass());
  if (static_cast<int>(mu.atoms().size()) >= n) {
    Eigen::MatrixXd m(mu.atoms().size(), n);
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) m.row(i) = mu.atoms()[i].u.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    v.min_singular_value = svd.singularValues()(n - 1);
  }
  v.spanning = v.min_singular_value > 1e-9;
  return v;
}

DiscreteSphereMeasure merge_measures(const DiscreteSphereMeasure& a, const DiscreteSphereMeasure& b) {
  if (a.dim() != b.dim()) throw GeometryError("merge_measures: dimension mismatch");
  DiscreteSphereMeasure out = a;
  for (const auto& at : b.atoms()) out.add(at.u, at.w);
  return out;
}

double Arc::angle() const { return std::acos(std::clamp(a.dot(b), -1.0, 1.0)); }

double ArcMeasure3D::total_mass() const {
  double m = 0;
  for (const auto& arc : arcs) m += arc.density * arc.angle();
  return m;
}

ArcMeasure3D area_measure_order1_3d(const Polytope& p) {
  if (p.ambient_dim() != 3 || !p.full_dimensional())
    throw GeometryError("area_measure_order1_3d: need a full-dimensional 3-polytope");
  ArcMeasure3D m;
  for (const auto& e : faces(p, 1)) {
    std::vector<int> adj;
    for (int f = 0; f < static_cast<int>(p.facets().size()); ++f) {
      const auto& vs = p.facets()[f].vertices;
      if (std::binary_search(vs.begin(), vs.end(), e[0]) && std::binary_search(vs.begin(), vs.end(), e[1]))
        adj.push_back(f);
    }
    if (adj.size() != 2) throw GeometryError("area_measure_order1_3d: edge without two facets");
    const double len = (p.vertices()[e[0]] - p.vertices()[e[1]]).norm();
    m.arcs.push_back({p.facets()[adj[0]].normal, p.facets()[adj[1]].normal, kArcDensityPerLength * len});
  }
  return m;
}

double arc_abs_integral(const Arc& arc, const Vec& u) {
  // v(t) = a cos t + c sin t, t in [0, alpha]; <u, v(t)> = R cos(t - phi).
  const double alpha = arc.angle();
  Vec c = arc.b - arc.a.dot(arc.b) * arc.a;
  const double cn = c.norm();
  if (cn == 0 || alpha == 0) return 0.0;
  c /= cn;
  const double A = u.dot(arc.a);
  const double C = u.dot(c);
  const double R = std::hypot(A, C);
  if (R == 0) return 0.0;
  const double phi = std::atan2(C, A);
  // Antiderivative of R cos(t - phi) is R sin(t - phi); split at its zeros
  // t = phi + pi/2 + k pi inside (0, alpha).
  std::vector<double> cuts{0.0};
  const double pi = std::numbers::pi;
  const double first = phi + pi / 2;
  const double k0 = std::ceil((0.0 - first) / pi);
  for (double k = k0;; k += 1) {
    const double t = first + k * pi;
    if (t >= alpha) break;
    if (t > 0) cuts.push_back(t);
  }
  cuts.push_back(alpha);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += std::abs(R * (std::sin(cuts[i + 1] - phi) - std::sin(cuts[i] - phi)));
  return total;
}

}  // namespace minkval
