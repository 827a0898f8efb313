#include "minkval/hull.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace minkval::hull {
namespace {

Result hull_1d(std::span<const Vec> pts, double tol) {
  int lo = 0, hi = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    if (pts[i](0) < pts[lo](0)) lo = i;
    if (pts[i](0) > pts[hi](0)) hi = i;
  }
  Result r;
  r.volume = pts[hi](0) - pts[lo](0);
  r.vertices = {lo, hi};
  for (int side = 0; side < 2; ++side) {
    const int idx = side == 0 ? lo : hi;
    Face f;
    f.normal = Vec::Constant(1, side == 0 ? -1.0 : 1.0);
    f.offset = f.normal(0) * pts[idx](0);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
      if (std::abs(pts[i](0) - pts[idx](0)) <= tol) f.members.push_back(i);
    f.vertices = {idx};
    f.area = 1.0;
    r.facets.push_back(std::move(f));
  }
  r.facets[0].ridges = {};
  r.facets[1].ridges = {};
  return r;
}

// Unit vector orthogonal to `a` and to the columns of `basis`.
Vec complement_direction(const Vec& a, const Mat& basis) {
  const int d = static_cast<int>(a.size());
  Vec best;
  double best_norm = -1;
  for (int k = 0; k < d; ++k) {
    Vec e = unit_vec(d, k);
    e -= a.dot(e) * a;
    for (int c = 0; c < basis.cols(); ++c) e -= basis.col(c).dot(e) * basis.col(c);
    const double nrm = e.norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = e / nrm;
    }
  }
  return best;
}

// Rotates the supporting hyperplane with normal `a` about an affine subspace
// through `anchor` (orthogonal to both a and w) towards w, stopping at the
// first point hit. Returns the rotated normal; `pivot` receives that point.
Vec wrap(std::span<const Vec> pts, const Vec& a, const Vec& w, const Vec& anchor, double tol, int* pivot = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const Vec d = pts[i] - anchor;
    const double y = d.dot(a);
    if (y >= -tol) continue;
    const double t = std::atan2(-y, d.dot(w));
    if (t < best) best = t, arg = i;
  }
  if (arg < 0) throw GeometryError("hull: degenerate wrap step");
  if (pivot) *pivot = arg;
  return (std::cos(best) * a + std::sin(best) * w).normalized();
}

struct Builder {
  std::span<const Vec> pts;
  double tol;
  int d;
  Vec centroid;

  // Facet with normal close to `guess` supporting the cloud at `anchor`.
  Face make_face(const Vec& guess, const Vec& anchor, const std::vector<int>& forced = {}) const {
    // A wrap about a ridge only a few tol long is ill-conditioned and can
    // return an almost rank-deficient member set; widen the band until the
    // members span a hyperplane.
    Face f;
    std::vector<Vec> on;
    Vec mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd;
    for (double band = tol;; band *= 4) {
      std::vector<char> take(pts.size(), 0);
      for (int i : forced) take[i] = 1;
      for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (std::abs((pts[i] - anchor).dot(guess)) <= band) take[i] = 1;
      f.members.clear();
      on.clear();
      for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (take[i]) {
          f.members.push_back(i);
          on.push_back(pts[i]);
        }
      // Least-squares plane: the smallest singular direction is the normal,
      // the others an orthonormal frame of the facet.
      mean = Vec::Zero(d);
      for (const auto& p : on) mean += p;
      mean /= static_cast<double>(on.size());
      Eigen::MatrixXd centered(static_cast<int>(on.size()), d);
      for (int k = 0; k < static_cast<int>(on.size()); ++k) centered.row(k) = (on[k] - mean).transpose();
      svd.compute(centered, Eigen::ComputeFullV);
      if (static_cast<int>(on.size()) >= d && svd.singularValues()(d - 2) > tol) break;
      if (band > 1e4 * tol) throw GeometryError("hull: facet candidate has wrong dimension");
    }
    AffineFrame fr;
    fr.origin = mean;
    fr.dim = d - 1;
    fr.basis = svd.matrixV().leftCols(d - 1);
    Vec n = svd.matrixV().col(d - 1);
    if (n.dot(guess) < 0) n = -n;
    if ((centroid - fr.origin).dot(n) > 0) n = -n;
    f.normal = n;
    double off = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) off = std::max(off, n.dot(p));
    f.offset = off;

    // Recursive hull of the facet in its own coordinates.
    std::vector<Vec> local;
    std::vector<int> origin; // local index -> input index
    for (std::size_t k = 0; k < on.size(); ++k) {
      const Vec y = fr.to_local(on[k]);
      bool dup = false;
      for (const auto& q : local) dup = dup || (q - y).norm() <= tol;
      if (dup) continue;
      local.push_back(y);
      origin.push_back(f.members[k]);
    }
    Result sub = full_hull(local, tol);
    f.area = sub.volume;
    for (int v : sub.vertices) f.vertices.push_back(origin[v]);
    for (auto& sf : sub.facets) {
      Ridge r;
      for (int m : sf.members) r.members.push_back(origin[m]);
      r.normal = fr.basis * sf.normal;
      f.ridges.push_back(std::move(r));
    }
    return f;
  }

  Face initial_face() const {
    int lo = 0;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i)
      if (pts[i](0) < pts[lo](0)) lo = i;
    const Vec anchor = pts[lo];
    Vec a = -unit_vec(d, 0);
    for (int iter = 0; iter <= d; ++iter) {
      std::vector<Vec> on;
      for (const auto& p : pts)
        if (std::abs((p - anchor).dot(a)) <= tol) on.push_back(p);
      const AffineFrame fr = affine_frame(on, tol);
      if (fr.dim == d - 1) return make_face(a, anchor);
      const Vec w = complement_direction(a, fr.basis);
      a = wrap(pts, a, w, anchor, tol);
    }
    throw GeometryError("hull: no initial facet");
  }
};

}  // namespace

Result full_hull(std::span<const Vec> pts, double tol) {
  const int d = static_cast<int>(pts.front().size());
  if (d == 1) return hull_1d(pts, tol);

  Builder b{pts, tol, d, Vec::Zero(d)};
  for (const auto& p : pts) b.centroid += p;
  b.centroid /= static_cast<double>(pts.size());

  Result res;
  res.facets.push_back(b.initial_face());
  std::deque<int> queue{0};
  const double same_normal = 1e-7;

  // Upper bound theorem facet counts with slack; near-degenerate noisy
  // input can otherwise keep producing spurious facets.
  const double m = static_cast<double>(pts.size());
  const double max_facets = 4.0 * (d == 2 ? m : d == 3 ? 2 * m : m * m / 2) + 16;

  while (!queue.empty()) {
    if (static_cast<double>(res.facets.size()) > max_facets) throw GeometryError("hull: facet enumeration did not close");
    const int fi = queue.front();
    queue.pop_front();
    for (std::size_t ri = 0; ri < res.facets[fi].ridges.size(); ++ri) {
      if (res.facets[fi].ridges[ri].neighbor >= 0) continue;
      const Vec a = res.facets[fi].normal;
      const Vec w = res.facets[fi].ridges[ri].normal;
      const Vec anchor = pts[res.facets[fi].ridges[ri].members.front()];
      int pivot = -1;
      const Vec guess = wrap(pts, a, w, anchor, tol, &pivot);

      int found = -1;
      for (int k = 0; k < static_cast<int>(res.facets.size()); ++k) {
        if ((res.facets[k].normal - guess).norm() < same_normal) {
          found = k;
          break;
        }
      }
      if (found < 0) {
        std::vector<int> forced = res.facets[fi].ridges[ri].members;
        forced.push_back(pivot);
        res.facets.push_back(b.make_face(guess, anchor, forced));
        found = static_cast<int>(res.facets.size()) - 1;
        queue.push_back(found);
      }
      res.facets[fi].ridges[ri].neighbor = found;
      // Link the shared ridge back: inside the neighbour its outward normal
      // is the component of our normal orthogonal to the neighbour's.
      auto& nb = res.facets[found];
      const Vec back = (a - a.dot(nb.normal) * nb.normal).normalized();
      for (auto& r : nb.ridges) {
        if (r.neighbor < 0 && r.normal.dot(back) > 1 - 1e-9) {
          r.neighbor = fi;
          break;
        }
      }
    }
  }

  std::vector<int> verts;
  for (const auto& f : res.facets) verts.insert(verts.end(), f.vertices.begin(), f.vertices.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  res.vertices = verts;

  Vec c = Vec::Zero(d);
  for (int v : verts) c += pts[v];
  c /= static_cast<double>(verts.size());
  double vol = 0;
  for (const auto& f : res.facets) vol += f.area * (f.offset - f.normal.dot(c));
  res.volume = vol / d;
  return res;
}

double affine_measure(std::span<const Vec> points, double tol, int* dim) {
  const AffineFrame fr = affine_frame(points, tol);
  if (dim) *dim = fr.dim;
  if (fr.dim == 0) return 1.0;
  std::vector<Vec> local;
  local.reserve(points.size());
  for (const auto& p : points) local.push_back(fr.to_local(p));
  return full_hull(dedupe(local, tol), tol).volume;
}

std::vector<Vec> dedupe(std::span<const Vec> points, double tol) {
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    bool dup = false;
    for (const auto& q : out) {
      if ((p - q).norm() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  return out;
}

double scaled_tolerance(std::span<const Vec> points) {
  if (points.empty()) return kGeoTol;
  Vec c = Vec::Zero(points.front().size());
  for (const auto& p : points) c += p;
  c /= static_cast<double>(points.size());
  double r = 0;
  for (const auto& p : points) r = std::max(r, (p - c).norm());
  return kGeoTol * std::max(1.0, r);
}

}  // namespace minkval::hull
