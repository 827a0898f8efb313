#include <cmath>

#include "doctest.h"
#include "minkval/io.hpp"

using namespace minkval;
using io::Json;

namespace {

Polytope unit_cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(make_vec({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)}));
  return convex_hull(pts);
}

}  // namespace

TEST_CASE("polytope JSON round trip is exact") {
  Rng rng(4);
  for (int n : {3, 4}) {
    const Polytope p = random_polytope(rng, n, 10);
    const std::string text = io::polytope_to_json(p).dump();
    const Polytope q = io::polytope_from_json(io::parse_json(text, "test"));
    REQUIRE(q.vertices().size() == p.vertices().size());
    for (std::size_t i = 0; i < p.vertices().size(); ++i) CHECK(q.vertices()[i] == p.vertices()[i]);
    CHECK(io::polytope_to_json(q).dump() == text);
  }
}

TEST_CASE("measure and zonotope JSON") {
  const DiscreteSphereMeasure mu = surface_area_measure(unit_cube());
  const std::string text = io::measure_to_json(mu).dump();
  const DiscreteSphereMeasure back = io::measure_from_json(io::parse_json(text, "m"));
  CHECK(io::measure_to_json(back).dump() == text);

  const Zonotope z = projection_body(unit_cube());
  const Json zj = io::zonotope_to_json(z);
  CHECK(zj["generators"].size() == 3);
  CHECK(io::zonotope_to_json(io::zonotope_from_json(zj)).dump() == zj.dump());
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(io::parse_json("{", "x"), io::InputError);
  CHECK_THROWS_AS(io::polytope_from_json(Json::parse(R"({"vertices": [[0,0,0]]})")), io::InputError);
  CHECK_THROWS_AS(io::polytope_from_json(Json::parse(R"({"dim": 3, "vertices": [[0,0]]})")), io::InputError);
  CHECK_THROWS_AS(io::polytope_from_json(Json::parse(R"({"dim": 3, "vertices": [[0,0,"a"]]})")), io::InputError);
  CHECK_THROWS_AS(io::polytope_from_json(Json::parse(R"({"dim": 7, "vertices": [[0]]})")), io::InputError);
  CHECK_THROWS_AS(io::measure_from_json(Json::parse(R"({"dim": 3, "atoms": [{"u": [1,0,0], "w": -1}]})")),
                  io::InputError);
  CHECK_THROWS_AS(io::measure_from_json(Json::parse(R"({"dim": 3, "atoms": [{"u": [0,0,0], "w": 1}]})")),
                  io::InputError);
  CHECK_THROWS_AS(io::kernel_from_json(Json::parse(R"({"name": "nope"})")), io::InputError);
  CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), io::InputError);
  CHECK_THROWS_AS(io::polytope_from_off("PLY\n"), io::InputError);
}

TEST_CASE("kernels from JSON") {
  const KernelPair p = io::kernel_from_json(Json::parse(R"({"name": "projection"})"));
  CHECK(p.p(-0.5) == doctest::Approx(0.25));
  const KernelPair c = io::kernel_from_json(Json::parse(R"({"cheb_p": [1, 0, 1], "cheb_q": [1, 0, -1]})"));
  CHECK(c.p(0.3) == doctest::Approx(0.09));
  CHECK(c.q(0.3) == doctest::Approx(0.3));
}

TEST_CASE("OFF round trip") {
  const Polytope cube = unit_cube();
  const std::string off = io::polytope_to_off(cube);
  CHECK(off.rfind("OFF\n8 6 0\n", 0) == 0);
  const Polytope back = io::polytope_from_off(off);
  CHECK(back.vertices().size() == 8);
  CHECK(volume(back) == doctest::Approx(1.0));
  // Facet loops are counter-clockwise seen from outside.
  std::istringstream in(off);
  std::string line;
  for (int i = 0; i < 10; ++i) std::getline(in, line);
  int k, a, b, c;
  in >> k >> a >> b >> c;
  const Vec n = (cube.vertices()[b] - cube.vertices()[a]).head<3>().cross((cube.vertices()[c] - cube.vertices()[a]).head<3>());
  const Vec centre = make_vec({0.5, 0.5, 0.5});
  CHECK(n.dot(cube.vertices()[a] - centre) > 0);
}

TEST_CASE("report JSON") {
  SuiteReport r;
  r.suite = "t";
  r.seed = 5;
  AxiomReport a;
  a.axiom = "valuation";
  a.operator_name = "x";
  a.max_residual = std::numeric_limits<double>::infinity();
  a.failures.push_back({17, a.max_residual});
  r.reports.push_back(a);
  const Json j = io::report_to_json(r);
  CHECK(j["failure_count"] == 1);
  CHECK(j["checks"][0]["max_residual"] == "inf");
  CHECK(j["checks"][0]["failures"][0]["seed"] == 17);
}
