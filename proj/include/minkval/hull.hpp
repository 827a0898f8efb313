#pragma once

// Low-level hull kernel shared by geomcore, the Minkowski solver and the
// Steiner point. Points are given in coordinates of their own affine hull,
// so a d-dimensional point set spans R^d.

#include <span>
#include <vector>

#include "minkval/geomcore.hpp"

namespace minkval::hull {

struct Ridge {
  std::vector<int> members; // indices into the input points
  Vec normal;               // outward normal of the ridge inside its facet
  int neighbor = -1;        // facet on the other side
};

struct Face {
  Vec normal;
  double offset = 0;
  std::vector<int> members;  // all input points on the hyperplane
  std::vector<int> vertices; // extreme members
  double area = 0;           // (d-1)-volume
  std::vector<Ridge> ridges;
};

struct Result {
  std::vector<Face> facets;
  std::vector<int> vertices;
  double volume = 0;
};

/// Gift wrapping with recursive facet hulls. `points` must affinely span R^d
/// (d = points[0].size(), 1 <= d <= 4); duplicates must already be merged.
Result full_hull(std::span<const Vec> points, double tol);

/// Volume of conv(points) inside its affine hull; writes the affine dimension.
double affine_measure(std::span<const Vec> points, double tol, int* dim = nullptr);

/// Removes points closer than `tol` to an earlier point.
std::vector<Vec> dedupe(std::span<const Vec> points, double tol);

/// Absolute tolerance for a point cloud: kGeoTol * max(1, extent).
double scaled_tolerance(std::span<const Vec> points);

}  // namespace minkval::hull
