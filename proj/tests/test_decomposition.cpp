#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "minkval/decomposition.hpp"

using namespace minkval;

namespace {

Polytope unit_cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(make_vec({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)}));
  return convex_hull(pts);
}

double sup_diff(const std::vector<double>& a, const std::function<double(const Vec&)>& f, const DirectionGrid& g) {
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a[i] - f(g.directions[i])));
  return worst;
}

}  // namespace

TEST_CASE("Vandermonde coefficients") {
  const auto v1 = vandermonde_coefficients(1);
  // Hand-solved 2x2 system.
  CHECK(v1.a(0, 0) == doctest::Approx(2.0));
  CHECK(v1.a(0, 1) == doctest::Approx(-1.0));
  CHECK(v1.a(1, 0) == doctest::Approx(-1.0));
  CHECK(v1.a(1, 1) == doctest::Approx(1.0));
  CHECK(vandermonde_coefficients(3).identity_residual() < 1e-12);
  for (int n = 1; n <= 6; ++n) CHECK(vandermonde_coefficients(n).identity_residual() < 1e-10);
  CHECK_THROWS_AS(vandermonde_coefficients(0), std::invalid_argument);
  CHECK_THROWS_AS(vandermonde_coefficients(7), std::invalid_argument);

  // Monomial input m^3 c recovers f_3 = c and nothing else.
  const auto v3 = vandermonde_coefficients(3);
  const double c = 1.7;
  for (int j = 0; j <= 3; ++j) {
    double f = 0;
    for (int m = 1; m <= 4; ++m) f += v3.a(j, m - 1) * m * m * m * c;
    CHECK(std::abs(f - (j == 3 ? c : 0.0)) < 1e-12);
  }
}

TEST_CASE("pure projection body decomposes into degree n-1") {
  for (int n : {3, 4}) {
    Rng rng(40 + n);
    const Polytope k = random_polytope(rng, n, n == 3 ? 10 : 7);
    const DirectionGrid g = sphere_grid(n, n == 3 ? 12 : 6);
    const auto d = decompose(composite_operator(1, 0, 0), k, g);
    const Zonotope z = projection_body(k);
    CHECK(sup_diff(d.components[n - 1].values, [&](const Vec& u) { return z.support(u); }, g) < 1e-8);
    for (int j = 0; j <= n; ++j)
      if (j != n - 1) CHECK(d.components[j].norm < 1e-8);
    CHECK(d.reconstruction_residual < 1e-9);
    CHECK(d.components[n - 1].sublinear);
    CHECK(d.components[n - 1].max_violation < 1e-9);
  }
}

TEST_CASE("pure trivial map decomposes into degree one") {
  Rng rng(5);
  const Polytope k = random_polytope(rng, 3, 9);
  const DirectionGrid g = sphere_grid(3, 12);
  const auto d = decompose(composite_operator(0, 1, 0), k, g);
  const Vec s = steiner_point_exact(k);
  CHECK(sup_diff(d.components[1].values, [&](const Vec& u) { return support(k, u) - s.dot(u); }, g) < 1e-9);
  for (int j : {0, 2, 3}) CHECK(d.components[j].norm < 1e-8);
}

TEST_CASE("composite operators split into exactly two degrees") {
  Rng rng(6);
  const Polytope k = random_polytope(rng, 3, 12);
  const DirectionGrid g = sphere_grid(3, 12);
  const auto d = decompose(composite_operator(1, 1, 1), k, g);
  CHECK(d.components[0].norm < 1e-8);
  CHECK(d.components[3].norm < 1e-8);
  CHECK(d.components[1].norm > 0.1);
  CHECK(d.components[2].norm > 0.1);
  const CompositeFit fit = fit_composite(d, k);
  CHECK(fit.c1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.c2 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fit.c3 == doctest::Approx(1.0).epsilon(1e-8));

  // Linearity of the extraction.
  const auto a = decompose(composite_operator(0.5, 0, 2), k, g);
  const auto b = decompose(composite_operator(0.25, 1, 0), k, g);
  const auto ab = decompose(sum_operator(composite_operator(0.5, 0, 2), composite_operator(0.25, 1, 0)), k, g);
  double worst = 0;
  for (int j = 0; j <= 3; ++j)
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst, std::abs(ab.components[j].values[i] - a.components[j].values[i] - b.components[j].values[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("components rotate with the body") {
  Rng rng(7);
  const Polytope k = random_polytope(rng, 3, 9);
  const Rotation r = random_rotation(rng, 3);
  const OperatorHandle phi = composite_operator(1, 0.5, 0.25);
  const ComponentOracle base(phi, k), turned(phi, apply_rotation(k, r));
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const Vec u = random_unit_vector(rng, 3);
    for (int j = 0; j <= 3; ++j) worst = std::max(worst, std::abs(turned(j, u) - base(j, r.inverse() * u)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("sublinearity check") {
  const DirectionGrid g = sphere_grid(3, 10);
  const auto pairs = sample_pairs(g, 3000, 11);
  const Zonotope z = projection_body(unit_cube());
  CHECK(sublinearity_check([&](const Vec& u) { return z.support(u); }, pairs) <= 1e-9);
  CHECK(sublinearity_check([](const Vec& u) { return -u.norm(); }, pairs) > 0.1);

  // Sign-flipping a genuine support function on a hemisphere is flagged.
  const auto corrupt = [&](const Vec& u) { return u(2) < 0 ? -z.support(u) : z.support(u); };
  CHECK(sublinearity_check(corrupt, pairs) > 0.1);
}

TEST_CASE("bodies from components") {
  const DirectionGrid g = sphere_grid(3, 24);
  const auto d = decompose(composite_operator(1, 0, 0), unit_cube(), g);
  const Polytope body = component_to_body(d.components[2], g);
  const Polytope exact = zonotope_to_polytope(projection_body(unit_cube()));
  CHECK(hausdorff_distance(body, exact, sphere_grid(3, 16)) < 1e-3);
  CHECK_THROWS_AS(component_to_body(DegreeComponent{}, g), NotASupportFunction);

  // A linear functional is the support function of a point.
  const Vec t = make_vec({0.3, -0.2, 0.5});
  std::vector<double> lin;
  for (const auto& u : g.directions) lin.push_back(t.dot(u));
  const Polytope pt = body_from_support(lin, g);
  CHECK(pt.dim() == 0);
  CHECK((pt.vertices().front() - t).norm() < 1e-12);

  // The unit ball: an outer approximation whose error shrinks with refinement.
  double prev = 1;
  for (int res : {6, 12, 24}) {
    const DirectionGrid gg = sphere_grid(3, res);
    const Polytope ball = body_from_support(std::vector<double>(gg.size(), 1.0), gg);
    double err = 0;
    for (const auto& v : ball.vertices()) err = std::max(err, v.norm() - 1);
    CHECK(err >= -1e-12);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("polytopality probe") {
  Rng rng(8);
  const Polytope k = random_polytope(rng, 3, 9);
  const PolytopalVerdict yes = polytopal_probe(composite_operator(1, 1, 1).apply(k), 3);
  CHECK(yes.polytopal);
  CHECK(yes.certified);
  CHECK(yes.fit_residual < 1e-8);
  CHECK(yes.vertices >= yes.grid_vertices);
  const PolytopalVerdict ball = polytopal_probe([](const Vec& u) { return u.norm(); }, 3);
  CHECK_FALSE(ball.polytopal);

  // The composite operator with a Steiner-point term can stay polytopal in 4D.
  const Polytope k4 = random_polytope(rng, 4, 6);
  CHECK(polytopal_probe(composite_operator(0, 1, 1).apply(k4), 4, 6).polytopal);
  CHECK(polytopal_probe(composite_operator(1, 0, 0).apply(k4), 4, 6).polytopal);
}
