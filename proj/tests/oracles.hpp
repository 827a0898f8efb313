#pragma once

// Test-only oracles. These intentionally avoid the library's hull code.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

struct P2 {
  double x, y;
};

/// Andrew's monotone chain followed by the shoelace formula.
inline double polygon_area(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  auto cross = [](const P2& o, const P2& a, const P2& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-15) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-15) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  double a = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& p = h[i];
    const auto& q = h[(i + 1) % h.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

/// Monte-Carlo estimate of n * E[h(u) u] over the uniform sphere in R^3.
template <class Support>
std::array<double, 3> steiner_monte_carlo(Support h, long samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::array<double, 3> s{0, 0, 0};
  for (long i = 0; i < samples; ++i) {
    double u[3] = {g(rng), g(rng), g(rng)};
    const double r = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    for (double& c : u) c /= r;
    // antithetic pair cancels the constant part of the error
    const double hp = h(u[0], u[1], u[2]);
    const double hm = h(-u[0], -u[1], -u[2]);
    for (int k = 0; k < 3; ++k) s[k] += 0.5 * (hp - hm) * u[k];
  }
  for (double& c : s) c *= 3.0 / samples;
  return s;
}

}  // namespace oracle
