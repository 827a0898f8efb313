#include "minkval/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include <omp.h>

namespace minkval {
namespace {

std::atomic<Exec> g_exec{Exec::parallel};

// All vertices whose lexicographically first halfspace is `first`.
void vertices_from(int first, std::span<const Vec> u, std::span<const double> h, double tol, std::vector<Vec>& out) {
  const int m = static_cast<int>(u.size());
  const int n = static_cast<int>(u.front().size());
  std::vector<int> pick(n);
  pick[0] = first;
  for (int i = 1; i < n; ++i) pick[i] = first + i;
  if (pick[n - 1] >= m) return;
  Mat a(n, n);
  Vec b(n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      a.row(i) = u[pick[i]].transpose();
      b(i) = h[pick[i]];
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-10);
    if (lu.isInvertible()) {
      const Vec x = lu.solve(b);
      bool inside = true;
      for (int j = 0; j < m && inside; ++j) inside = u[j].dot(x) <= h[j] + tol;
      if (inside) out.push_back(x);
    }
    int i = n - 1;
    while (i >= 1 && pick[i] == m - n + i) --i;
    if (i < 1) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<Vec> merge_close(const std::vector<std::vector<Vec>>& parts, double tol) {
  std::vector<Vec> out;
  for (const auto& part : parts)
    for (const auto& x : part) {
      const bool dup = std::any_of(out.begin(), out.end(), [&](const Vec& y) { return (x - y).norm() <= tol; });
      if (!dup) out.push_back(x);
    }
  return out;
}

}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

std::vector<Vec> halfspace_vertices(std::span<const Vec> normals, std::span<const double> h, double tol, Exec exec) {
  const int m = static_cast<int>(normals.size());
  if (m == 0) return {};
  std::vector<std::vector<Vec>> parts(m);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) vertices_from(i, normals, h, tol, parts[i]);
  } else {
    for (int i = 0; i < m; ++i) vertices_from(i, normals, h, tol, parts[i]);
  }
  return merge_close(parts, tol);
}

std::vector<double> support_table(std::span<const Vec> vertices, std::span<const Vec> directions, Exec exec) {
  const long k = static_cast<long>(directions.size());
  std::vector<double> t(k);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < k; ++i) t[i] = support(vertices, directions[i]);
  } else {
    for (long i = 0; i < k; ++i) t[i] = support(vertices, directions[i]);
  }
  return t;
}

std::vector<double> evaluate_on_grid(const std::function<double(const Vec&)>& f, std::span<const Vec> directions,
                                     Exec exec) {
  const long k = static_cast<long>(directions.size());
  std::vector<double> t(k);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < k; ++i) t[i] = f(directions[i]);
  } else {
    for (long i = 0; i < k; ++i) t[i] = f(directions[i]);
  }
  return t;
}

Vec steiner_grid_sum(std::span<const Vec> directions, std::span<const double> weights, std::span<const double> h,
                     Exec exec) {
  const int n = static_cast<int>(directions.front().size());
  const long k = static_cast<long>(directions.size());
  // Fixed-size blocks summed in block order keep the result independent of
  // the thread count.
  constexpr long kBlock = 1024;
  const long blocks = (k + kBlock - 1) / kBlock;
  std::vector<Vec> partial(blocks, Vec::Zero(n));
  auto block_sum = [&](long b) {
    Vec s = Vec::Zero(n);
    for (long i = b * kBlock; i < std::min(k, (b + 1) * kBlock); ++i) s += weights[i] * h[i] * directions[i];
    partial[b] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < blocks; ++b) block_sum(b);
  } else {
    for (long b = 0; b < blocks; ++b) block_sum(b);
  }
  Vec s = Vec::Zero(n);
  for (const auto& p : partial) s += p;
  return n * s;
}

}  // namespace minkval
