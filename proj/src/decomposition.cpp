#include "minkval/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minkval/hull.hpp"
#include "minkval/kernels.hpp"

namespace minkval {

double VandermondeCoefficients::identity_residual() const {
  double worst = 0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double s = 0;
      for (int m = 1; m <= n + 1; ++m) s += a(j, m - 1) * std::pow(double(m), i);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

VandermondeCoefficients vandermonde_coefficients(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("vandermonde_coefficients: n must be in 1..6");
  const int k = n + 1;
  // Gauss-Jordan on [V | I] in long double.
  std::vector<std::vector<long double>> w(k, std::vector<long double>(2 * k, 0));
  for (int m = 0; m < k; ++m) {
    long double p = 1;
    for (int i = 0; i < k; ++i) {
      w[m][i] = p;
      p *= (m + 1);
    }
    w[m][k + m] = 1;
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(w[r][col]) > std::abs(w[piv][col])) piv = r;
    std::swap(w[col], w[piv]);
    const long double d = w[col][col];
    for (auto& x : w[col]) x /= d;
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const long double f = w[r][col];
      if (f == 0) continue;
      for (int c = 0; c < 2 * k; ++c) w[r][c] -= f * w[col][c];
    }
  }
  VandermondeCoefficients vc;
  vc.n = n;
  vc.a.resize(k, k);
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < k; ++m) vc.a(j, m) = static_cast<double>(w[j][k + m]);
  return vc;
}

ComponentOracle::ComponentOracle(const OperatorHandle& phi, const Polytope& k)
    : n_(k.ambient_dim()), coeff_(vandermonde_coefficients(k.ambient_dim())) {
  for (int m = 1; m <= n_ + 1; ++m) dilates_.push_back(phi.bind(scale(k, m)));
}

double ComponentOracle::operator()(int j, const Vec& u) const {
  double s = 0;
  for (int m = 0; m <= n_; ++m) s += coeff_.a(j, m) * dilates_[m](u);
  return s;
}

std::vector<std::pair<Vec, Vec>> sample_pairs(const DirectionGrid& grid, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  std::vector<std::pair<Vec, Vec>> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i) pairs.emplace_back(grid.directions[pick(rng)], grid.directions[pick(rng)]);
  return pairs;
}

double sublinearity_check(const std::function<double(const Vec&)>& f, const std::vector<std::pair<Vec, Vec>>& pairs) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pairs) worst = std::max(worst, f(a + b) - f(a) - f(b));
  return pairs.empty() ? 0.0 : worst;
}

HomogeneousDecomposition decompose(const OperatorHandle& phi, const Polytope& k, const DirectionGrid& grid,
                                   const DecomposeOptions& opt) {
  const ComponentOracle oracle(phi, k);
  const int n = oracle.dim();
  const auto& a = oracle.coefficients().a;
  HomogeneousDecomposition d;
  d.n = n;
  d.grid = grid;

  std::vector<std::vector<double>> tables;
  for (int m = 1; m <= n + 1; ++m) {
    const SupportFunction hm = phi.bind(scale(k, m));
    tables.push_back(evaluate_on_grid(hm, grid.directions));
  }
  d.measured = tables.front();

  const std::size_t g = grid.size();
  double overall = 0;
  for (int j = 0; j <= n; ++j) {
    DegreeComponent c;
    c.degree = j;
    c.values.assign(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
      double s = 0;
      for (int m = 0; m <= n; ++m) s += a(j, m) * tables[m][i];
      c.values[i] = s;
      c.norm = std::max(c.norm, std::abs(s));
    }
    overall = std::max(overall, c.norm);
    d.components.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < g; ++i) {
    double s = 0;
    for (const auto& c : d.components) s += c.values[i];
    d.reconstruction_residual = std::max(d.reconstruction_residual, std::abs(s - d.measured[i]));
  }

  // All components share the dilate evaluations at u1, u2 and u1 + u2.
  const auto pairs = sample_pairs(grid, opt.sublinearity_pairs, opt.seed);
  const long np = static_cast<long>(pairs.size());
  std::vector<double> viol(np * (n + 1));
  auto eval_pair = [&](long p) {
    const auto& [u1, u2] = pairs[p];
    const Vec s = u1 + u2;
    for (int j = 0; j <= n; ++j) viol[p * (n + 1) + j] = oracle(j, s) - oracle(j, u1) - oracle(j, u2);
  };
  if (default_exec() == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long p = 0; p < np; ++p) eval_pair(p);
  } else {
    for (long p = 0; p < np; ++p) eval_pair(p);
  }
  for (int j = 0; j <= n; ++j) {
    auto& c = d.components[j];
    c.max_violation = np ? -std::numeric_limits<double>::infinity() : 0.0;
    for (long p = 0; p < np; ++p) c.max_violation = std::max(c.max_violation, viol[p * (n + 1) + j]);
    c.sublinear = c.max_violation <= opt.tau_sub * std::max(overall, 1e-300);
  }
  return d;
}

Polytope body_from_support(const std::vector<double>& values, const DirectionGrid& grid, double flat_tol) {
  const Vec c = steiner_grid_sum(grid.directions, grid.weights, values);
  std::vector<double> g(values.size());
  double top = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    g[i] = values[i] - c.dot(grid.directions[i]);
    top = std::max(top, g[i]);
  }
  if (top <= 1e-12 * std::max(1.0, c.norm())) return convex_hull(std::vector<Vec>{c});
  std::vector<Vec> dual;
  dual.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dual.push_back(grid.directions[i] / std::max(g[i], flat_tol * top));
  const Polytope d = convex_hull(dual);
  if (!d.full_dimensional()) throw GeometryError("body_from_support: grid does not span the sphere");
  std::vector<Vec> verts;
  for (const auto& f : d.facets()) verts.push_back(c + f.normal / f.offset);
  return convex_hull(verts);
}

Polytope component_to_body(const DegreeComponent& c, const DirectionGrid& grid) {
  if (!c.sublinear) throw NotASupportFunction("component of degree " + std::to_string(c.degree) + " is not sublinear");
  return body_from_support(c.values, grid);
}

namespace {

constexpr int kProbeMaxPoints = 2000;
constexpr int kProbeMaxRounds = 50;

Vec difference_gradient(const SupportFunction& h, const Vec& u, double step) {
  const int n = static_cast<int>(u.size());
  Vec x(n);
  for (int k = 0; k < n; ++k) {
    const Vec e = unit_vec(n, k) * step;
    x(k) = (h(u + e) - h(u - e)) / (2 * step);
  }
  return x;
}

// Exposed points. Directions are jittered off the (measure-zero) ridges of
// h, where central differences return averages of vertices; a jittered
// direction still within a difference step of a ridge is detected by
// disagreement between two step sizes and retried.
std::vector<Vec> exposed_points(const SupportFunction& h, std::span<const Vec> dirs, double eps, std::uint64_t seed) {
  const long g = static_cast<long>(dirs.size());
  std::vector<std::optional<Vec>> pts(g);
  auto probe = [&](long i) {
    Rng rng(seed + static_cast<std::uint64_t>(i));
    for (int attempt = 0; attempt < 4; ++attempt) {
      const Vec u = dirs[i] + 1e-4 * random_unit_vector(rng, static_cast<int>(dirs[i].size()));
      const Vec a = difference_gradient(h, u, 1e-5);
      const Vec b = difference_gradient(h, u, 1e-6);
      if ((a - b).norm() <= eps) {
        pts[i] = a;
        return;
      }
    }
  };
  if (default_exec() == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < g; ++i) probe(i);
  } else {
    for (long i = 0; i < g; ++i) probe(i);
  }
  std::vector<Vec> out;
  for (auto& p : pts)
    if (p) out.push_back(std::move(*p));
  return out;
}

// Appends the points not within `eps` of one already present; false once the
// set outgrows what a small polytope can produce.
bool absorb(std::vector<Vec>& set, const std::vector<Vec>& pts, double eps) {
  for (const auto& p : pts) {
    const bool seen = std::any_of(set.begin(), set.end(), [&](const Vec& q) { return (p - q).norm() <= eps; });
    if (!seen) {
      set.push_back(p);
      if (static_cast<int>(set.size()) > kProbeMaxPoints) return false;
    }
  }
  return true;
}

}  // namespace

PolytopalVerdict polytopal_probe(const SupportFunction& h, int n, int resolution, double tol, std::uint64_t seed) {
  PolytopalVerdict v;
  const DirectionGrid grid = sphere_grid(n, resolution);
  double scale = 1;
  for (const auto& u : grid.directions) scale = std::max(scale, std::abs(h(u)));
  v.scale = scale;
  const double eps = tol * scale;
  const std::vector<Vec> first = exposed_points(h, grid.directions, eps, seed);
  if (first.empty()) return v;

  std::vector<Vec> pts;
  if (!absorb(pts, first, eps)) return v;
  Polytope body;
  try {
    body = convex_hull(pts);
  } catch (const GeometryError&) {
    return v;
  }
  v.grid_vertices = static_cast<int>(body.vertices().size());

  // Every exposed point lies in the body, so conv(pts) is inside it. If h
  // agrees with conv(pts) on each facet normal, the body is contained in the
  // intersection of those facet halfspaces as well, hence equal to conv(pts).
  // Otherwise the exposed point in the offending direction is new; add it.
  for (; v.rounds < kProbeMaxRounds; ++v.rounds) {
    if (!body.full_dimensional()) break;
    std::vector<Vec> missed;
    double worst = 0;
    for (const auto& f : body.facets()) {
      const double gap = h(f.normal) - f.offset;
      worst = std::max(worst, gap);
      if (gap > eps) missed.push_back(f.normal);
    }
    v.certificate_gap = worst;
    if (missed.empty()) {
      v.certified = true;
      break;
    }
    pts = body.vertices();
    if (!absorb(pts, exposed_points(h, missed, eps, seed + 7919 * (v.rounds + 1)), eps)) return v;
    try {
      body = convex_hull(pts);
    } catch (const GeometryError&) {
      // Dense clusters the hull cannot resolve come from curved boundaries.
      return v;
    }
  }
  v.vertices = static_cast<int>(body.vertices().size());

  Rng rng(seed ^ 0x5eedULL);
  for (int t = 0; t < 200; ++t) {
    const Vec u = random_unit_vector(rng, n);
    v.fit_residual = std::max(v.fit_residual, std::abs(h(u) - support(body, u)));
  }
  v.polytopal = (v.certified || !body.full_dimensional()) && v.fit_residual <= eps;
  return v;
}

CompositeFit fit_composite(const HomogeneousDecomposition& d, const Polytope& k) {
  const int n = d.n;
  const Zonotope z = projection_body(k);
  const Vec s = steiner_point_exact(k);
  CompositeFit fit;
  double num = 0, den = 0;
  // Even and odd parts of f_1 are fitted against those of h(K - s, .); with
  // an antipodally symmetric grid this is the 2x2 least-squares problem in
  // the basis h(K - s, u), h(K - s, -u).
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  Eigen::Vector2d r = Eigen::Vector2d::Zero();
  const auto& f_top = d.components[n - 1].values;
  const auto& f_one = d.components[1].values;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    const Vec& u = d.grid.directions[i];
    const double zp = z.support(u);
    num += f_top[i] * zp;
    den += zp * zp;
    const Eigen::Vector2d b(support(k, u) - s.dot(u), support(k, -u) + s.dot(u));
    m += b * b.transpose();
    r += b * f_one[i];
  }
  fit.c1 = den > 0 ? num / den : 0;
  const Eigen::Vector2d c = m.ldlt().solve(r);
  fit.c2 = c(0);
  fit.c3 = c(1);
  return fit;
}

}  // namespace minkval
