#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// version; both produce identical output (same order, same floating-point
// operations per entry), which the test suite checks bitwise.

#include <functional>
#include <span>
#include <vector>

#include "minkval/geomcore.hpp"

namespace minkval {

enum class Exec { serial, parallel };

/// Default policy for library code; the CLI's --threads 1 switches to serial.
Exec default_exec();
void set_default_exec(Exec e);

/// Vertices of {x : <u_i, x> <= h_i} by brute force over n-subsets of the
/// halfspaces; duplicates within `tol` are merged, order is deterministic.
std::vector<Vec> halfspace_vertices(std::span<const Vec> normals, std::span<const double> h, double tol,
                                    Exec exec = default_exec());

/// table[i] = max_v <v, directions[i]>.
std::vector<double> support_table(std::span<const Vec> vertices, std::span<const Vec> directions,
                                  Exec exec = default_exec());

/// table[i] = f(directions[i]); f must be reentrant.
std::vector<double> evaluate_on_grid(const std::function<double(const Vec&)>& f, std::span<const Vec> directions,
                                     Exec exec = default_exec());

/// n * sum_i w_i h_i u_i.
Vec steiner_grid_sum(std::span<const Vec> directions, std::span<const double> weights, std::span<const double> h,
                     Exec exec = default_exec());

}  // namespace minkval
