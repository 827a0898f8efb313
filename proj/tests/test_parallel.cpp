#include <omp.h>

#include "doctest.h"
#include "minkval/decomposition.hpp"
#include "minkval/harness.hpp"
#include "minkval/io.hpp"
#include "minkval/kernels.hpp"

using namespace minkval;

// The parallel kernels must agree bit for bit with the serial reference,
// whatever the thread count.

namespace {

struct ThreadCount {
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
  int saved;
};

struct ExecGuard {
  explicit ExecGuard(Exec e) : saved(default_exec()) { set_default_exec(e); }
  ~ExecGuard() { set_default_exec(saved); }
  Exec saved;
};

}  // namespace

TEST_CASE("support tables and grid sums") {
  const ThreadCount threads(4);
  Rng rng(1);
  for (int n : {3, 4}) {
    const Polytope p = random_polytope(rng, n, 15);
    const DirectionGrid g = sphere_grid(n, n == 3 ? 40 : 12);
    const auto a = support_table(p.vertices(), g.directions, Exec::serial);
    const auto b = support_table(p.vertices(), g.directions, Exec::parallel);
    CHECK(a == b);
    const Vec s = steiner_grid_sum(g.directions, g.weights, a, Exec::serial);
    const Vec t = steiner_grid_sum(g.directions, g.weights, a, Exec::parallel);
    CHECK(s == t);
    const auto f = [&](const Vec& u) { return support(p, u) * u.norm(); };
    CHECK(evaluate_on_grid(f, g.directions, Exec::serial) == evaluate_on_grid(f, g.directions, Exec::parallel));
  }
}

TEST_CASE("halfspace vertex enumeration") {
  const ThreadCount threads(4);
  Rng rng(2);
  for (int n : {3, 4}) {
    const Polytope p = random_polytope(rng, n, 12);
    std::vector<Vec> normals;
    std::vector<double> h;
    for (const auto& f : p.facets()) {
      normals.push_back(f.normal);
      h.push_back(f.offset);
    }
    const auto a = halfspace_vertices(normals, h, 1e-10, Exec::serial);
    const auto b = halfspace_vertices(normals, h, 1e-10, Exec::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(a.size() == p.vertices().size());
  }
}

TEST_CASE("decomposition and suite reports") {
  const ThreadCount threads(4);
  Rng rng(3);
  const Polytope k = random_polytope(rng, 3, 9);
  const DirectionGrid g = sphere_grid(3, 10);
  HomogeneousDecomposition ds, dp;
  {
    const ExecGuard e(Exec::serial);
    ds = decompose(composite_operator(1, 2, 0.5), k, g);
  }
  {
    const ExecGuard e(Exec::parallel);
    dp = decompose(composite_operator(1, 2, 0.5), k, g);
  }
  CHECK(io::decomposition_to_json(ds).dump() == io::decomposition_to_json(dp).dump());

  SuiteConfig cfg;
  cfg.dims = {3};
  cfg.valuation_trials = 16;
  cfg.translation_trials = 8;
  cfg.rotation_trials = 8;
  cfg.homogeneity_trials = 8;
  cfg.polytopal_trials = 2;
  cfg.decomposition_trials = 2;
  std::string serial, parallel;
  {
    const ExecGuard e(Exec::serial);
    serial = io::report_to_json(run_named_suite("default", cfg)).dump();
  }
  {
    const ExecGuard e(Exec::parallel);
    parallel = io::report_to_json(run_named_suite("default", cfg)).dump();
  }
  CHECK(serial == parallel);
}
