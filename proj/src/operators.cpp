#include "minkval/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace minkval {

double Zonotope::support(const Vec& u) const {
  double h = center.dot(u);
  for (const auto& g : generators) h += std::abs(g.dot(u));
  return h;
}

void Zonotope::add_generator(const Vec& g) {
  const double gn = g.norm();
  if (gn == 0) return;
  for (auto& h : generators) {
    const double c = h.dot(g) / (h.norm() * gn);
    if (1.0 - std::abs(c) < kAtomMergeTol) {
      h += (c > 0 ? 1.0 : -1.0) * g;
      return;
    }
  }
  generators.push_back(g);
}

Zonotope projection_body(const Polytope& p) {
  const int n = p.ambient_dim();
  Zonotope z;
  z.center = Vec::Zero(n);
  if (p.full_dimensional()) {
    for (const auto& f : p.facets()) z.add_generator(0.5 * f.area * f.normal);
  } else if (p.dim() == n - 1) {
    z.add_generator(p.affine_volume() * p.hyperplane_normal());
  }
  return z;
}

Polytope zonotope_to_polytope(const Zonotope& z) {
  const int n = z.dim();
  const int m = static_cast<int>(z.generators.size());
  if (m > kMaxZonotopeGenerators) throw GeometryError("zonotope_to_polytope: too many generators");
  if (m == 0) return convex_hull(std::vector<Vec>{z.center});

  std::set<std::vector<signed char>> signs;
  auto add_cell = [&](const Vec& d, const std::vector<int>& free) {
    std::vector<signed char> s(m);
    for (int i = 0; i < m; ++i) s[i] = z.generators[i].dot(d) >= 0 ? 1 : -1;
    for (long mask = 0; mask < (1L << free.size()); ++mask) {
      for (std::size_t b = 0; b < free.size(); ++b) s[free[b]] = (mask >> b) & 1 ? 1 : -1;
      signs.insert(s);
    }
  };

  double gmax = 0;
  for (const auto& g : z.generators) gmax = std::max(gmax, g.norm());
  const double tol = 1e-12 * gmax;

  // Arrangement rays: directions orthogonal to n-1 independent generators.
  // Every cell of the arrangement has one in its closure; the generators
  // vanishing on the ray are left free.
  const int k = std::min(n - 1, m);
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    Mat a(k, n);
    for (int i = 0; i < k; ++i) a.row(i) = z.generators[pick[i]].transpose();
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const bool independent = sv(k - 1) > 1e-12 * sv(0);
    if (independent) {
      // the null space has dimension n - k; enumerate a spanning set of it
      for (int c = k; c < n; ++c) {
        const Vec d = svd.matrixV().col(c);
        std::vector<int> free;
        for (int i = 0; i < m; ++i)
          if (std::abs(z.generators[i].dot(d)) <= tol * 1e3) free.push_back(i);
        if (free.size() > 16) throw GeometryError("zonotope_to_polytope: degenerate generator arrangement");
        add_cell(d, free);
        add_cell(-d, free);
      }
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }

  std::vector<Vec> pts;
  pts.reserve(signs.size());
  for (const auto& s : signs) {
    Vec v = z.center;
    for (int i = 0; i < m; ++i) v += s[i] * z.generators[i];
    pts.push_back(v);
  }
  return convex_hull(pts);
}

namespace {

SupportFunction polytope_support(std::vector<Vec> verts) {
  return [verts = std::move(verts)](const Vec& u) { return support(std::span<const Vec>(verts), u); };
}

OperatorClaims claims_with_degree(std::function<std::optional<int>(int)> degree) {
  OperatorClaims c;
  c.degree = std::move(degree);
  return c;
}

}  // namespace

OperatorHandle projection_operator() {
  OperatorHandle h;
  h.name = "projection";
  h.bind = [](const Polytope& p) -> SupportFunction {
    Zonotope z = projection_body(p);
    return [z = std::move(z)](const Vec& u) { return z.support(u); };
  };
  h.claims = claims_with_degree([](int n) { return std::optional<int>(n - 1); });
  return h;
}

OperatorHandle identity_operator() {
  OperatorHandle h;
  h.name = "I";
  h.bind = [](const Polytope& p) -> SupportFunction {
    const Vec s = steiner_point_exact(p);
    auto hp = polytope_support(p.vertices());
    return [s, hp = std::move(hp)](const Vec& u) { return hp(u) - s.dot(u); };
  };
  h.claims = claims_with_degree([](int) { return std::optional<int>(1); });
  h.claims.steiner_dependent = true;
  return h;
}

OperatorHandle neg_identity_operator() {
  OperatorHandle h;
  h.name = "-I";
  h.bind = [](const Polytope& p) -> SupportFunction {
    const Vec s = steiner_point_exact(p);
    auto hp = polytope_support(p.vertices());
    return [s, hp = std::move(hp)](const Vec& u) { return hp(-u) + s.dot(u); };
  };
  h.claims = claims_with_degree([](int) { return std::optional<int>(1); });
  h.claims.steiner_dependent = true;
  return h;
}

OperatorHandle composite_operator(double c1, double c2, double c3) {
  if (c1 < 0 || c2 < 0 || c3 < 0) throw std::invalid_argument("composite_operator: negative coefficient");
  OperatorHandle h;
  h.name = "composite";
  h.bind = [c1, c2, c3](const Polytope& p) -> SupportFunction {
    Zonotope z = projection_body(p);
    const Vec s = steiner_point_exact(p);
    auto hp = polytope_support(p.vertices());
    return [=, z = std::move(z), hp = std::move(hp)](const Vec& u) {
      double v = 0;
      if (c1 != 0) v += c1 * z.support(u);
      if (c2 != 0) v += c2 * (hp(u) - s.dot(u));
      if (c3 != 0) v += c3 * (hp(-u) + s.dot(u));
      return v;
    };
  };
  h.claims = claims_with_degree([c1, c2, c3](int n) -> std::optional<int> {
    const bool has_pi = c1 != 0, has_one = c2 != 0 || c3 != 0;
    if (has_pi && !has_one) return n - 1;
    if (has_one && !has_pi) return 1;
    if (!has_pi && !has_one) return 0;
    return std::nullopt;
  });
  h.claims.steiner_dependent = c2 != 0 || c3 != 0;
  return h;
}

OperatorHandle sum_operator(const OperatorHandle& a, const OperatorHandle& b) {
  OperatorHandle h;
  h.name = a.name + "+" + b.name;
  h.bind = [a, b](const Polytope& p) -> SupportFunction {
    SupportFunction fa = a.bind(p), fb = b.bind(p);
    return [fa = std::move(fa), fb = std::move(fb)](const Vec& u) { return fa(u) + fb(u); };
  };
  h.claims.valuation = a.claims.valuation && b.claims.valuation;
  h.claims.translation_invariant = a.claims.translation_invariant && b.claims.translation_invariant;
  h.claims.rotation_equivariant = a.claims.rotation_equivariant && b.claims.rotation_equivariant;
  h.claims.polytopal = a.claims.polytopal && b.claims.polytopal;
  h.claims.steiner_dependent = a.claims.steiner_dependent || b.claims.steiner_dependent;
  h.claims.degree = [da = a.claims.degree, db = b.claims.degree](int n) -> std::optional<int> {
    const auto x = da(n), y = db(n);
    if (x && y && *x == *y) return x;
    return std::nullopt;
  };
  return h;
}

// ---- kernels ----------------------------------------------------------------

KernelPair KernelPair::projection() {
  return {[](double t) { return 0.5 * std::abs(t); }, [](double) { return 0.0; }, "projection"};
}

KernelPair KernelPair::zero() { return {[](double) { return 0.0; }, [](double) { return 0.0; }, "zero"}; }

namespace {

std::function<double(double)> chebyshev_interpolant(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 2) throw KernelError("kernel table needs at least two values");
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = std::cos(std::numbers::pi * k / (n - 1));
    w[k] = (k % 2 == 0 ? 1.0 : -1.0) * ((k == 0 || k == n - 1) ? 0.5 : 1.0);
  }
  return [x = std::move(x), w = std::move(w), f = std::move(values)](double t) {
    double num = 0, den = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double d = t - x[k];
      if (d == 0) return f[k];
      const double c = w[k] / d;
      num += c * f[k];
      den += c;
    }
    return num / den;
  };
}

}  // namespace

KernelPair KernelPair::from_chebyshev(std::vector<double> p_values, std::vector<double> q_values) {
  return {chebyshev_interpolant(std::move(p_values)), chebyshev_interpolant(std::move(q_values)), "chebyshev"};
}

double KernelPair::parity_defect(int nodes) const {
  double worst = 0;
  for (int k = 0; k < nodes; ++k) {
    const double t = std::cos(std::numbers::pi * k / (nodes - 1));
    worst = std::max(worst, std::abs(p(t) - p(-t)));
    worst = std::max(worst, std::abs(q(t) + q(-t)));
  }
  return worst;
}

OperatorHandle bm_homomorphism(const KernelPair& k) {
  if (k.parity_defect() > 1e-12) throw KernelError("bm_homomorphism: p must be even and q odd");
  OperatorHandle h;
  h.name = "bm:" + k.name;
  h.bind = [k](const Polytope& poly) -> SupportFunction {
    DiscreteSphereMeasure mu = surface_area_measure_limit(poly);
    return [k, mu = std::move(mu)](const Vec& u) {
      const double r = u.norm();
      if (r == 0) return 0.0;
      double v = 0;
      for (const auto& a : mu.atoms()) {
        const double t = std::clamp(u.dot(a.u) / r, -1.0, 1.0);
        v += (k.p(t) + k.q(t)) * a.w;
      }
      return r * v;
    };
  };
  h.claims = claims_with_degree([](int n) { return std::optional<int>(n - 1); });
  h.claims.polytopal = false;
  return h;
}

double projection_body_order1_3d(const ArcMeasure3D& s1, const Vec& u) {
  double v = 0;
  for (const auto& arc : s1.arcs) v += arc.density * arc_abs_integral(arc, u);
  return 0.5 * v;
}

double projection_body_order1_3d(const Polytope& p, const Vec& u) {
  if (std::abs(u.norm() - 1.0) > 1e-12) throw GeometryError("projection_body_order1_3d: direction must be a unit vector");
  return projection_body_order1_3d(area_measure_order1_3d(p), u);
}

OperatorHandle projection_order1_operator() {
  OperatorHandle h;
  h.name = "pi1";
  h.bind = [](const Polytope& p) -> SupportFunction {
    ArcMeasure3D s1 = area_measure_order1_3d(p);
    return [s1 = std::move(s1)](const Vec& u) { return projection_body_order1_3d(s1, u); };
  };
  h.claims = claims_with_degree([](int) { return std::optional<int>(1); });
  // Only full-dimensional bodies are supported, so the split identity is not exercised.
  h.claims.valuation = false;
  return h;
}

}  // namespace minkval
