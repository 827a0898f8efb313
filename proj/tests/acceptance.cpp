// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: acceptance <path to minkval CLI>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include <unistd.h>

#include "minkval/decomposition.hpp"
#include "minkval/harness.hpp"
#include "minkval/io.hpp"
#include "minkval/minkowski_solver.hpp"
#include "minkval/operators.hpp"

using namespace minkval;
using Clock = std::chrono::steady_clock;

namespace {

int failed = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failed;
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

Polytope unit_cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(make_vec({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)}));
  return convex_hull(pts);
}

Polytope centred_cube(double side) {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i)
    pts.push_back(side * make_vec({(i & 1) - 0.5, ((i >> 1) & 1) - 0.5, ((i >> 2) & 1) - 0.5}));
  return convex_hull(pts);
}

// Max distance between lexicographically sorted vertex lists; inf on count mismatch.
double vertex_set_distance(std::vector<Vec> a, std::vector<Vec> b) {
  if (a.size() != b.size()) return INFINITY;
  auto lex = [](const Vec& x, const Vec& y) {
    for (int i = 0; i < x.size(); ++i) {
      if (std::abs(x(i) - y(i)) > 1e-6) return x(i) < y(i);
    }
    return false;
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a[i] - b[i]).norm());
  return d;
}

Polytope random_with_facets(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> m(6, 12);
  for (;;) {
    Polytope p = random_polytope(rng, 3, m(rng));
    const int f = static_cast<int>(p.facets().size());
    if (f >= lo && f <= hi) return p;
  }
}

void cauchy_formula() {
  const auto t0 = Clock::now();
  Rng rng(1);
  double worst = 0;
  for (int n : {3, 4}) {
    const int pairs = n == 3 ? 1000 : 200;
    for (int t = 0; t < pairs; ++t) {
      const Polytope p = random_polytope(rng, n, 5 + static_cast<int>(rng() % 10));
      const Vec u = random_unit_vector(rng, n);
      worst = std::max(worst, std::abs(projection_body(p).support(u) - projection_volume(p, u)));
    }
  }
  const double dt = seconds_since(t0);
  report(1, worst < 1e-8 && dt < 30, fmt("Cauchy formula, 1000 pairs in R^3 + 200 in R^4: max error %.2e, %.1f s", worst, dt));
}

void projection_of_cube() {
  const Polytope c = unit_cube();
  const Polytope pc = zonotope_to_polytope(projection_body(c));
  const double dv = vertex_set_distance(pc.vertices(), centred_cube(2.0).vertices());
  Rng rng(2);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const Vec u = random_unit_vector(rng, 3);
    worst = std::max(worst, std::abs(u.cwiseAbs().sum() - projection_volume(c, u)));
  }
  report(2, dv < 1e-9 && worst < 1e-12,
         fmt("Pi[0,1]^3 = [-1,1]^3: vertex distance %.2e; |u1|+|u2|+|u3| vs shadow oracle %.2e", dv, worst));
}

void valuation_of_pi() {
  SuiteConfig cfg;
  const AxiomReport r = check_valuation(projection_operator(), 3, 200, cfg);
  report(3, r.passed() && r.max_residual < 1e-8,
         fmt("Pi valuation identity, 200 splits in R^3: max residual %.2e", r.max_residual));
}

void equivariance() {
  SuiteConfig cfg;
  bool ok = true;
  std::string detail;
  for (const auto& phi : {projection_operator(), identity_operator(), neg_identity_operator()}) {
    const double bound = phi.name == "projection" ? 1e-9 : 1e-6;
    double worst = 0;
    for (int n : {3, 4}) {
      worst = std::max(worst, check_translation_invariance(phi, n, 100, cfg).max_residual);
      worst = std::max(worst, check_rotation_equivariance(phi, n, 100, cfg).max_residual);
    }
    ok = ok && worst < bound;
    detail += fmt("%s %.2e (< %.0e); ", phi.name.c_str(), worst, bound);
  }
  report(4, ok, "translation/rotation, 100 trials per check in R^3 and R^4: " + detail);
}

void solver_round_trip() {
  const auto t0 = Clock::now();
  Rng rng(5);
  const DirectionGrid g = sphere_grid(3, 24);
  double worst_r = 0, worst_h = 0;
  int worst_it = 0, unconverged = 0;
  for (int t = 0; t < 50; ++t) {
    const Polytope p = random_with_facets(rng, 8, 20);
    const SolveReport r = solve_minkowski(surface_area_measure(p));
    unconverged += r.converged ? 0 : 1;
    worst_r = std::max(worst_r, r.final_residual);
    worst_it = std::max(worst_it, r.iterations);
    worst_h = std::max(worst_h, hausdorff_distance(r.polytope, translate(p, -steiner_point_exact(p)), g));
  }
  const double dt = seconds_since(t0);
  report(5, unconverged == 0 && worst_it <= 200 && worst_r < 1e-6 && worst_h < 1e-5 && dt < 120,
         fmt("Minkowski solver, 50 bodies with 8-20 facets: %d unconverged, max %d iterations, area residual %.2e, "
             "Hausdorff %.2e, %.1f s",
             unconverged, worst_it, worst_r, worst_h, dt));
}

void blaschke_cube() {
  const Polytope r = blaschke_sum(unit_cube(), unit_cube());
  const double d = vertex_set_distance(r.vertices(), centred_cube(std::numbers::sqrt2).vertices());
  report(6, d < 1e-6, fmt("cube # cube = side-sqrt2 cube at 0: vertex distance %.2e", d));
}

void decomposition() {
  SuiteConfig cfg;
  double worst = 0;
  bool ok = true;
  for (int n : {3, 4}) {
    const AxiomReport r = check_decomposition_roundtrip(n, 20, cfg);
    ok = ok && r.passed();
    worst = std::max(worst, r.max_residual);
  }
  report(7, ok,
         fmt("composite decomposition, 20 triples in R^3 and R^4: worst error / tolerance = %.2e "
             "(tolerances 1e-6 top, 1e-5 c2/c3, 1e-7 vanishing)",
             worst));
}

void sublinearity() {
  Rng rng(8);
  double worst = 0, corrupted = INFINITY;
  for (int n : {3, 4}) {
    const DirectionGrid g = sphere_grid(n, n == 3 ? 10 : 5);
    const auto pairs = sample_pairs(g, 2000, 11);
    for (int t = 0; t < 5; ++t) {
      const Polytope k = random_polytope(rng, n, 8);
      const ComponentOracle f(composite_operator(1.0, 0.7, 0.4), k);
      for (int j : {1, n - 1}) {
        worst = std::max(worst, sublinearity_check([&](const Vec& u) { return f(j, u); }, pairs));
        const double bad = sublinearity_check([&](const Vec& u) { return u(0) < 0 ? -f(j, u) : f(j, u); }, pairs);
        corrupted = std::min(corrupted, bad);
      }
    }
  }
  report(8, worst < 1e-8 && corrupted > 1e-8,
         fmt("sublinearity of f_1, f_{n-1}: max violation %.2e; hemisphere-flipped copies flagged, min violation %.2e",
             worst, corrupted));
}

void steiner() {
  const double dc = (steiner_point_exact(unit_cube()) - make_vec({0.5, 0.5, 0.5})).norm();
  Rng rng(9);
  double add = 0, pi = 0;
  for (int t = 0; t < 50; ++t) {
    const Polytope p = random_polytope(rng, 3, 6 + t % 5), q = random_polytope(rng, 3, 6 + t % 4);
    add = std::max(add, (steiner_point_exact(minkowski_sum(p, q)) - steiner_point_exact(p) - steiner_point_exact(q)).norm());
    pi = std::max(pi, steiner_point_exact(zonotope_to_polytope(projection_body(p))).norm());
  }
  report(9, dc < 1e-4 && add < 2e-4 && pi < 1e-4,
         fmt("Steiner point: cube %.2e; additivity over 50 pairs %.2e; s(Pi P) %.2e", dc, add, pi));
}

void zonotope_faces() {
  Rng rng(10);
  double worst = 0;
  long count = 0;
  for (int n : {3, 4}) {
    for (int t = 0; t < 50; ++t) {
      const Polytope z = zonotope_to_polytope(projection_body(random_polytope(rng, n, n == 3 ? 8 : 6)));
      for (const auto& face : faces(z, 2)) {
        Vec c = Vec::Zero(n);
        for (int v : face) c += z.vertices()[v];
        c /= static_cast<double>(face.size());
        for (int v : face) {
          const Vec mirror = 2 * c - z.vertices()[v];
          double best = INFINITY;
          for (int w : face) best = std::min(best, (z.vertices()[w] - mirror).norm());
          worst = std::max(worst, best);
        }
        ++count;
      }
    }
  }
  report(10, worst < 1e-8, fmt("2-faces of Pi P centrally symmetric, 50 bodies in R^3 and R^4 (%ld faces): max mismatch %.2e",
                               count, worst));
}

// Midpoint rule over slerp parametrizations of the twelve quarter-circle
// arcs of the cube's first-order area measure, density 1/2.
double pi1_cube_oracle(const Vec& u, int panels) {
  double total = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int si : {-1, 1})
        for (int sj : {-1, 1}) {
          const Vec a = si * unit_vec(3, i), b = sj * unit_vec(3, j);
          double acc = 0;
          for (int k = 0; k < panels; ++k) {
            const double th = 0.5 * std::numbers::pi * (k + 0.5) / panels;
            acc += std::abs(u.dot(std::cos(th) * a + std::sin(th) * b));
          }
          total += 0.5 * acc * (0.5 * std::numbers::pi / panels);
        }
  return 0.5 * total;
}

void pi1() {
  Rng rng(11);
  double rot = 0, hom = 0;
  for (int t = 0; t < 50; ++t) {
    const Polytope p = random_polytope(rng, 3, 6 + t % 7);
    const Rotation r = random_rotation(rng, 3);
    const Vec u = random_unit_vector(rng, 3);
    const double lambda = 0.5 + static_cast<double>(t % 5);
    const double h = projection_body_order1_3d(p, u);
    rot = std::max(rot, std::abs(projection_body_order1_3d(apply_rotation(p, r), r * u) - h));
    hom = std::max(hom, std::abs(projection_body_order1_3d(scale(p, lambda), u) - lambda * h));
  }
  const Vec u = make_vec({1, 2, 2}) / 3.0;
  const double oracle = pi1_cube_oracle(u, 200000);
  const double rel = std::abs(projection_body_order1_3d(unit_cube(), u) - oracle) / oracle;
  report(11, rot < 1e-8 && hom < 1e-10 && rel < 1e-6,
         fmt("Pi_1 over 50 trials: rotation %.2e, degree-1 homogeneity %.2e; cube vs arc quadrature %.2e relative", rot,
             hom, rel));
}

void determinism(const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("minkval_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  double slowest = 0;
  int rc[2];
  std::string text[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("report" + std::to_string(k) + ".json");
    const std::string cmd = "\"" + cli + "\" verify --suite default --seed 42 --json \"" + out.string() + "\" > /dev/null";
    const auto t0 = Clock::now();
    rc[k] = std::system(cmd.c_str());
    slowest = std::max(slowest, seconds_since(t0));
    try {
      text[k] = io::read_file(out.string());
    } catch (const std::exception&) {
      text[k] = "";
    }
  }
  fs::remove_all(dir);
  const bool same = !text[0].empty() && text[0] == text[1];
  report(12, same && rc[0] == 0 && rc[1] == 0 && slowest < 300,
         fmt("verify --suite default --seed 42 twice: %s reports (%zu bytes), exit codes %d/%d, slowest run %.1f s",
             same ? "identical" : "DIFFERENT", text[0].size(), rc[0], rc[1], slowest));
}

void guarded(int id, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <minkval CLI>\n");
    return 2;
  }
  guarded(1, cauchy_formula);
  guarded(2, projection_of_cube);
  guarded(3, valuation_of_pi);
  guarded(4, equivariance);
  guarded(5, solver_round_trip);
  guarded(6, blaschke_cube);
  guarded(7, decomposition);
  guarded(8, sublinearity);
  guarded(9, steiner);
  guarded(10, zonotope_faces);
  guarded(11, pi1);
  guarded(12, [&] { determinism(argv[1]); });
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
