#include "minkval/minkowski_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkval/hull.hpp"
#include "minkval/kernels.hpp"
#include "minkval/operators.hpp"

namespace minkval {

namespace {

// Area of the convex polygon spanned by `pts` inside the 2-plane with
// orthonormal basis `basis`. Clustered or collinear points contribute zero,
// so no tolerance decisions are needed.
double polygon_area(const std::vector<Vec>& pts, const Mat& basis) {
  if (pts.size() < 3) return 0;
  Vec c = Vec::Zero(pts.front().size());
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::vector<std::pair<double, Eigen::Vector2d>> ring;
  for (const auto& p : pts) {
    const Eigen::Vector2d y(basis.col(0).dot(p - c), basis.col(1).dot(p - c));
    ring.push_back({std::atan2(y(1), y(0)), y});
  }
  std::sort(ring.begin(), ring.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double a = 0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    const auto& p = ring[k].second;
    const auto& q = ring[(k + 1) % ring.size()].second;
    a += p(0) * q(1) - p(1) * q(0);
  }
  return 0.5 * std::abs(a);
}

double diameter(const std::vector<Vec>& pts) {
  double d = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

// Orthonormal basis of span{a, b}-perp in R^4.
Mat complement2(const Vec& a, const Vec& b) {
  Mat m(4, 2);
  m.col(0) = a;
  m.col(1) = b;
  Eigen::HouseholderQR<Mat> qr(m);
  const Mat q = qr.householderQ();
  return q.rightCols(2);
}

}  // namespace

HalfspaceBody evaluate_halfspaces(std::span<const Vec> normals, std::span<const double> h) {
  const int m = static_cast<int>(normals.size());
  const int n = static_cast<int>(normals.front().size());
  if (n != 3 && n != 4) throw std::invalid_argument("evaluate_halfspaces: n must be 3 or 4");
  double scale = 1.0;
  for (double x : h) scale = std::max(scale, std::abs(x));
  // Vertices are accurate to ~1e-15 * condition; anything looser blurs
  // degenerate vertices into neighbouring facets and floors the residual.
  const double tol = 1e-11 * scale;

  HalfspaceBody body;
  body.areas.assign(m, 0.0);
  body.vertices = halfspace_vertices(normals, h, tol);
  if (static_cast<int>(body.vertices.size()) <= n) return body;

  std::vector<std::vector<int>> tight(m);
  for (int i = 0; i < m; ++i)
    for (int v = 0; v < static_cast<int>(body.vertices.size()); ++v)
      if (std::abs(normals[i].dot(body.vertices[v]) - h[i]) <= 10 * tol) tight[i].push_back(v);

  // Ridge measures R_ij from the common tight vertices.
  std::vector<int> common;
  std::vector<Vec> pts;
  std::vector<std::vector<std::pair<int, double>>> ridges(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(tight[i].size()) < n) continue;
    for (int j = i + 1; j < m; ++j) {
      common.clear();
      std::set_intersection(tight[i].begin(), tight[i].end(), tight[j].begin(), tight[j].end(),
                            std::back_inserter(common));
      if (static_cast<int>(common.size()) < n - 1) continue;
      pts.clear();
      for (int v : common) pts.push_back(body.vertices[v]);
      const double r = n == 3 ? diameter(pts) : polygon_area(pts, complement2(normals[i], normals[j]));
      if (r <= 0) continue;
      ridges[i].push_back({j, r});
      ridges[j].push_back({i, r});
    }
  }

  for (int i = 0; i < m; ++i) {
    if (n == 3) {
      pts.clear();
      for (int v : tight[i]) pts.push_back(body.vertices[v]);
      body.areas[i] = polygon_area(pts, orthogonal_complement(normals[i]));
    } else {
      // Lasserre: A_i = 1/(n-1) sum_j h_ij R_ij, h_ij the ridge's support
      // number inside the facet relative to the foot point h_i u_i.
      double a = 0;
      for (const auto& [j, r] : ridges[i]) {
        const double c = normals[i].dot(normals[j]);
        const double s = std::sqrt(std::max(1e-300, 1.0 - c * c));
        a += (h[j] - c * h[i]) / s * r;
      }
      body.areas[i] = std::max(0.0, a / (n - 1));
    }
  }
  for (int i = 0; i < m; ++i) body.volume += h[i] * body.areas[i];
  body.volume /= n;

  for (int i = 0; i < m; ++i) {
    if (body.areas[i] == 0) continue;
    for (const auto& [j, r] : ridges[i]) {
      if (body.areas[j] == 0) continue;
      const double c = normals[i].dot(normals[j]);
      body.couplings.push_back({i, j, r / std::sqrt(std::max(1e-300, 1.0 - c * c))});
    }
  }
  return body;
}

double gradient_consistency(std::span<const Vec> normals, std::span<const double> h, double step) {
  const HalfspaceBody base = evaluate_halfspaces(normals, h);
  std::vector<double> hp(h.begin(), h.end());
  double worst = 0;
  double amax = *std::max_element(base.areas.begin(), base.areas.end());
  for (std::size_t i = 0; i < hp.size(); ++i) {
    const double keep = hp[i];
    hp[i] = keep + step;
    const double vp = evaluate_halfspaces(normals, hp).volume;
    hp[i] = keep - step;
    const double vm = evaluate_halfspaces(normals, hp).volume;
    hp[i] = keep;
    const double fd = (vp - vm) / (2 * step);
    worst = std::max(worst, std::abs(fd - base.areas[i]) / std::max(base.areas[i], 1e-3 * amax));
  }
  return worst;
}

namespace {

struct Problem {
  std::vector<Vec> u;
  std::vector<double> w;  // normalized to unit total mass
  int n = 0;
  int m = 0;
};

double objective(const Problem& pb, const std::vector<double>& h, HalfspaceBody* out = nullptr) {
  HalfspaceBody b = evaluate_halfspaces(pb.u, h);
  double g = std::numeric_limits<double>::infinity();
  if (b.volume > 0) {
    g = -std::log(b.volume);
    for (int i = 0; i < pb.m; ++i) g += pb.w[i] * h[i];
  }
  if (out) *out = std::move(b);
  return g;
}

// Residual of the rescaled body against the target weights (both of unit mass).
double area_residual(const Problem& pb, const HalfspaceBody& b) {
  double total = 0;
  for (double a : b.areas) total += a;
  if (total <= 0) return std::numeric_limits<double>::infinity();
  double r = 0;
  for (int i = 0; i < pb.m; ++i) r = std::max(r, std::abs(b.areas[i] / total - pb.w[i]) / pb.w[i]);
  return r;
}

struct Attempt {
  std::vector<double> h;
  HalfspaceBody body;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool stalled = false;
};

Attempt newton(const Problem& pb, double h0, const SolverConfig& cfg, double damping, int budget) {
  const int m = pb.m, n = pb.n;
  Attempt at;
  at.h.assign(m, h0);

  // Projector onto the translation subspace spanned by the columns (<u_i, e_k>)_i.
  Eigen::MatrixXd U(m, n);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) U(i, k) = pb.u[i](k);
  const Eigen::MatrixXd PT = U * (U.transpose() * U).inverse() * U.transpose();

  double g0 = objective(pb, at.h, &at.body);
  for (; at.iterations < budget; ++at.iterations) {
    at.residual = area_residual(pb, at.body);
    if (at.residual <= cfg.tol_area) {
      at.converged = true;
      return at;
    }
    const HalfspaceBody& b = at.body;
    const double V = b.volume;
    Eigen::VectorXd a(m), grad(m);
    for (int i = 0; i < m; ++i) {
      a(i) = b.areas[i];
      grad(i) = pb.w[i] - b.areas[i] / V;
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (const auto& c : b.couplings) {
      J(c.i, c.j) = c.value;
      J(c.i, c.i) -= c.value * pb.u[c.i].dot(pb.u[c.j]);
    }
    Eigen::MatrixXd H = a * a.transpose() / (V * V) - J / V;
    // Absent facets carry no curvature; give them a unit-scale diagonal so
    // the step only pushes their planes back towards the body.
    for (int i = 0; i < m; ++i)
      if (b.areas[i] == 0) H(i, i) += 1.0;
    H += PT;
    H.diagonal().array() += cfg.regularization;
    Eigen::VectorXd d = H.ldlt().solve(-grad);
    if (!d.allFinite()) d = H.colPivHouseholderQr().solve(-grad);
    d -= PT * d;

    // Keep steps below half the current size of the body.
    double hmax = 0;
    for (double x : at.h) hmax = std::max(hmax, std::abs(x));
    const double dmax = d.cwiseAbs().maxCoeff();
    double t = damping;
    if (t * dmax > 0.5 * hmax) t = 0.5 * hmax / dmax;

    const double slope = grad.dot(d);
    // Once the predicted decrease is at rounding level the objective can no
    // longer rank steps; the area residual takes over as merit function.
    const bool endgame = -slope < 1e-8 * (1 + std::abs(g0));
    std::vector<double> trial(m);
    HalfspaceBody tb;
    double gt = std::numeric_limits<double>::infinity();
    for (;;) {
      for (int i = 0; i < m; ++i) trial[i] = at.h[i] + t * d(i);
      gt = objective(pb, trial, &tb);
      if (endgame ? std::isfinite(gt) && area_residual(pb, tb) < at.residual : gt <= g0 + 1e-4 * t * slope) break;
      t *= 0.5;
      if (t < 1e-12) {
        at.stalled = true;
        return at;
      }
    }
    at.h = trial;
    at.body = std::move(tb);
    g0 = gt;
  }
  at.residual = area_residual(pb, at.body);
  at.converged = at.residual <= cfg.tol_area;
  return at;
}

}  // namespace

SolveReport solve_minkowski(const DiscreteSphereMeasure& mu, const SolverConfig& cfg) {
  if (cfg.tol_area <= 0 || cfg.max_iter < 1) throw std::invalid_argument("solve_minkowski: bad configuration");
  const int n = mu.dim();
  const int m = static_cast<int>(mu.atoms().size());
  if (n != 3 && n != 4) throw std::invalid_argument("solve_minkowski: n must be 3 or 4");
  if (m < n + 1 || m > kMaxSolverAtoms) throw std::invalid_argument("solve_minkowski: atom count out of range");
  const MinkowskiVerdict verdict = check_minkowski_conditions(mu);
  if (!verdict.passed())
    throw MinkowskiConditionError(verdict.balanced ? "measure is concentrated on a great subsphere"
                                                   : "measure is not centred");

  Problem pb;
  pb.n = n;
  pb.m = m;
  const double mass = mu.total_mass();
  for (const auto& atom : mu.atoms()) {
    pb.u.push_back(atom.u);
    pb.w.push_back(atom.w / mass);
  }

  const double h0 = std::pow(mass, 1.0 / (n - 1));
  SolveReport rep;
  Attempt at;
  double damping = cfg.damping;
  int used = 0;
  for (int restart = 0; restart <= 3; ++restart) {
    at = newton(pb, h0, cfg, damping, cfg.max_iter - used);
    used += at.iterations;
    rep.restarts = restart;
    if (at.converged || !at.stalled || used >= cfg.max_iter) break;
    damping *= 0.5;
  }
  rep.iterations = used;
  rep.final_residual = at.residual;
  rep.converged = at.converged;

  double total = 0;
  for (double a : at.body.areas) total += a;
  if (total <= 0 || at.body.vertices.empty()) {
    rep.polytope = convex_hull(std::vector<Vec>{Vec::Zero(n)});
    return rep;
  }
  const double lambda = std::pow(mass / total, 1.0 / (n - 1));
  // Degenerate vertices (more than n planes) come out as tight clusters.
  std::vector<Vec> scaled;
  for (const auto& v : at.body.vertices) scaled.push_back(lambda * v);
  double extent = 0;
  for (const auto& v : scaled) extent = std::max(extent, v.norm());
  const std::vector<Vec> verts = hull::dedupe(scaled, kVertexSnap * extent);
  const Polytope raw = convex_hull(verts);
  rep.polytope = translate(raw, -steiner_point_exact(raw));
  return rep;
}

Polytope blaschke_sum(const Polytope& p, const Polytope& q, const SolverConfig& cfg) {
  if (p.ambient_dim() != q.ambient_dim()) throw GeometryError("blaschke_sum: dimension mismatch");
  const SolveReport r = solve_minkowski(merge_measures(surface_area_measure(p), surface_area_measure(q)), cfg);
  if (!r.converged) throw std::runtime_error("blaschke_sum: Minkowski solver did not converge");
  return r.polytope;
}

}  // namespace minkval
