// minkval: command-line front end. Every subcommand reads polytope JSON (or
// OFF when the file ends in .off) and writes JSON to stdout or --out.
//
// Exit codes: 0 success, 1 verification failures, 2 usage error,
// 3 malformed input or violated preconditions, 4 numerical non-convergence.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "minkval/decomposition.hpp"
#include "minkval/harness.hpp"
#include "minkval/io.hpp"
#include "minkval/kernels.hpp"
#include "minkval/minkowski_solver.hpp"
#include "minkval/operators.hpp"

using namespace minkval;
using io::Json;

namespace {

enum Exit { kOk = 0, kFailures = 1, kUsage = 2, kInput = 3, kNoConvergence = 4 };

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string path;
  void emit(const Json& j) const {
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-") std::cout << text;
    else io::write_file(path, text);
  }
};

Vec parse_direction(const std::string& s, int n) {
  std::vector<double> xs;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw io::InputError("direction: bad component \"" + tok + "\"");
    }
  }
  if (static_cast<int>(xs.size()) != n)
    throw io::InputError("direction: expected " + std::to_string(n) + " components, got " + std::to_string(xs.size()));
  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = xs[i];
  return u;
}

// Support values of h on --u, or on a sphere grid of the given resolution.
Json support_values(const SupportFunction& h, int n, const std::string& u, int grid) {
  if (!u.empty()) return Json{{"u", io::vec_to_json(parse_direction(u, n))}, {"value", h(parse_direction(u, n))}};
  const DirectionGrid g = sphere_grid(n, grid);
  const std::vector<double> vals = evaluate_on_grid(h, g.directions);
  Json dirs = Json::array();
  for (const auto& d : g.directions) dirs.push_back(io::vec_to_json(d));
  return Json{{"dim", n}, {"directions", dirs}, {"values", vals}};
}

KernelPair load_kernel(const std::string& path) {
  return io::kernel_from_json(io::parse_json(io::read_file(path), path));
}

// projection | identity | neg-identity | pi1 | composite:c1,c2,c3 | bmh:<kernel.json>
OperatorHandle parse_operator(const std::string& spec) {
  if (spec == "projection") return projection_operator();
  if (spec == "identity") return identity_operator();
  if (spec == "neg-identity") return neg_identity_operator();
  if (spec == "pi1") return projection_order1_operator();
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "composite" && !arg.empty()) {
    std::vector<double> c;
    std::stringstream in(arg);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        c.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw io::InputError("operator: bad coefficient \"" + tok + "\"");
      }
    }
    if (c.size() != 3) throw io::InputError("operator: composite needs three coefficients");
    try {
      return composite_operator(c[0], c[1], c[2]);
    } catch (const std::invalid_argument& e) {
      throw io::InputError(std::string("operator: ") + e.what());
    }
  }
  if (head == "bmh" && !arg.empty()) return bm_homomorphism(load_kernel(arg));
  throw io::InputError("operator: unknown spec \"" + spec + "\"");
}

Json hull_json(const Polytope& p) {
  Json j = io::polytope_to_json(p);
  j["volume"] = p.volume();
  Json facets = Json::array();
  for (const auto& f : p.facets())
    facets.push_back(Json{{"normal", io::vec_to_json(f.normal)}, {"offset", f.offset}, {"area", f.area}, {"vertices", f.vertices}});
  j["facets"] = facets;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski valuations on convex polytopes in R^3 and R^4"};
  app.set_config("--config", "", "TOML file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  Output out;
  app.add_option("--threads", threads, "OpenMP threads (1 selects the serial kernels)")->check(CLI::NonNegativeNumber);
  app.add_option("-o,--out", out.path, "Output file (default stdout)");

  std::string body, body2, u, measure_path, kernel_path, op_spec, suite = "default", json_path, off_path;
  int grid = 12;
  double tol = 1e-8;
  int max_iter = 200;
  std::uint64_t seed = 42;
  bool exact = false, as_polytope = false;

  auto* hull = app.add_subcommand("hull", "Convex hull of a point set");
  hull->add_option("points", body, "Polytope JSON or OFF")->required();
  hull->add_option("--off", off_path, "Also write the hull as OFF (n = 3)");

  auto* sup = app.add_subcommand("support", "Support function values");
  sup->add_option("body", body, "Polytope JSON or OFF")->required();
  sup->add_option("--u", u, "Direction as comma-separated components");
  sup->add_option("--grid", grid, "Sphere grid resolution when --u is absent")->check(CLI::PositiveNumber);

  auto* pb = app.add_subcommand("project-body", "Projection body as a zonotope");
  pb->add_option("body", body, "Polytope JSON or OFF")->required();
  pb->add_flag("--polytope", as_polytope, "Write the vertex description instead of generators");

  auto* st = app.add_subcommand("steiner", "Steiner point");
  st->add_option("body", body, "Polytope JSON or OFF")->required();
  st->add_option("--grid", grid, "Sphere grid resolution for the quadrature value")->check(CLI::PositiveNumber);
  st->add_flag("--exact", exact, "Only the exact external-angle value");

  auto* p1 = app.add_subcommand("pi1", "Projection body of order 1 (n = 3), support values");
  p1->add_option("body", body, "Polytope JSON or OFF")->required();
  p1->add_option("--u", u, "Direction as comma-separated components");
  p1->add_option("--grid", grid, "Sphere grid resolution when --u is absent")->check(CLI::PositiveNumber);

  auto* bmh = app.add_subcommand("bmh", "Kernel-defined homomorphism, support values");
  bmh->add_option("body", body, "Polytope JSON or OFF")->required();
  bmh->add_option("--kernel", kernel_path, "Kernel JSON")->required();
  bmh->add_option("--u", u, "Direction as comma-separated components");
  bmh->add_option("--grid", grid, "Sphere grid resolution when --u is absent")->check(CLI::PositiveNumber);

  auto* ms = app.add_subcommand("minkowski-solve", "Polytope with a prescribed surface area measure");
  ms->add_option("--measure,measure", measure_path, "Measure JSON")->required();
  ms->add_option("--tol", tol, "Relative facet-area tolerance")->check(CLI::PositiveNumber);
  ms->add_option("--max-iter", max_iter, "Newton iteration limit")->check(CLI::PositiveNumber);

  auto* bs = app.add_subcommand("blaschke-sum", "Blaschke sum of two polytopes");
  bs->add_option("a", body, "Polytope JSON or OFF")->required();
  bs->add_option("b", body2, "Polytope JSON or OFF")->required();
  bs->add_option("--tol", tol, "Relative facet-area tolerance")->check(CLI::PositiveNumber);

  auto* dec = app.add_subcommand("decompose", "Homogeneous decomposition of an operator at a body");
  dec->add_option("--operator", op_spec,
                  "projection | identity | neg-identity | pi1 | composite:c1,c2,c3 | bmh:<kernel.json>")
      ->required();
  dec->add_option("--body", body, "Polytope JSON or OFF")->required();
  dec->add_option("--grid", grid, "Sphere grid resolution")->check(CLI::PositiveNumber);
  dec->add_flag("--values", as_polytope, "Include the per-degree value tables");

  auto* ver = app.add_subcommand("verify", "Run a property suite");
  ver->add_option("--suite", suite, "default | extended | broken | empty");
  ver->add_option("--seed", seed, "Suite seed");
  ver->add_option("--json", json_path, "Write the full report here");

  if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
    std::cerr << "error: unknown subcommand \"" << argv[1] << "\"\n";
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return kOk;
    // Unreadable config files are input errors, everything else usage.
    return dynamic_cast<const CLI::FileError*>(&e) ? kInput : kUsage;
  }

  if (threads > 0) {
    omp_set_num_threads(threads);
    set_default_exec(threads == 1 ? Exec::serial : Exec::parallel);
  }

  try {
    if (*hull) {
      const Polytope p = io::load_polytope(body);
      if (!off_path.empty()) io::write_file(off_path, io::polytope_to_off(p));
      out.emit(hull_json(p));
    } else if (*sup) {
      const Polytope p = io::load_polytope(body);
      out.emit(support_values([&](const Vec& v) { return support(p, v); }, p.ambient_dim(), u, grid));
    } else if (*pb) {
      const Zonotope z = projection_body(io::load_polytope(body));
      out.emit(as_polytope ? io::polytope_to_json(zonotope_to_polytope(z)) : io::zonotope_to_json(z));
    } else if (*st) {
      const Polytope p = io::load_polytope(body);
      Json j{{"exact", io::vec_to_json(steiner_point_exact(p))}};
      if (!exact) j["grid"] = Json{{"resolution", grid}, {"value", io::vec_to_json(steiner_point(p, sphere_grid(p.ambient_dim(), grid)))}};
      out.emit(j);
    } else if (*p1) {
      const Polytope p = io::load_polytope(body);
      if (p.ambient_dim() != 3) throw io::InputError("pi1: needs a 3-polytope");
      out.emit(support_values(projection_order1_operator().apply(p), 3, u, grid));
    } else if (*bmh) {
      const Polytope p = io::load_polytope(body);
      out.emit(support_values(bm_homomorphism(load_kernel(kernel_path)).apply(p), p.ambient_dim(), u, grid));
    } else if (*ms) {
      const DiscreteSphereMeasure mu = io::measure_from_json(io::parse_json(io::read_file(measure_path), measure_path));
      SolverConfig cfg;
      cfg.tol_area = tol;
      cfg.max_iter = max_iter;
      const SolveReport r = solve_minkowski(mu, cfg);
      out.emit(io::solve_report_to_json(r));
      if (!r.converged) throw NoConvergence("minkowski-solve: no convergence after " + std::to_string(r.iterations) +
                                            " iterations, residual " + std::to_string(r.final_residual));
    } else if (*bs) {
      SolverConfig cfg;
      cfg.tol_area = tol;
      Polytope r;
      try {
        r = blaschke_sum(io::load_polytope(body), io::load_polytope(body2), cfg);
      } catch (const MinkowskiConditionError&) {
        throw;
      } catch (const GeometryError&) {
        throw;
      } catch (const std::runtime_error& e) {
        throw NoConvergence(e.what());
      }
      out.emit(io::polytope_to_json(r));
    } else if (*dec) {
      const OperatorHandle phi = parse_operator(op_spec);
      const Polytope k = io::load_polytope(body);
      const HomogeneousDecomposition d = decompose(phi, k, sphere_grid(k.ambient_dim(), grid));
      Json degrees = Json::object();
      for (const auto& c : d.components) {
        Json e{{"norm", c.norm}, {"sublinear", c.sublinear}, {"max_violation", c.max_violation}};
        if (as_polytope) e["values"] = c.values;
        degrees[std::to_string(c.degree)] = e;
      }
      Json j{{"operator", phi.name}, {"dim", d.n}, {"grid", grid}, {"degrees", degrees},
             {"reconstruction_residual", d.reconstruction_residual}};
      if (op_spec.rfind("composite", 0) == 0) {
        const CompositeFit f = fit_composite(d, k);
        j["composite_fit"] = Json{{"c1", f.c1}, {"c2", f.c2}, {"c3", f.c3}};
        // I and -I coincide on centrally symmetric bodies.
        const Vec s = steiner_point_exact(k);
        double asym = 0, ext = 0;
        for (const auto& v : d.grid.directions) {
          asym = std::max(asym, std::abs(support(k, v) - s.dot(v) - support(k, -v) - s.dot(v)));
          ext = std::max(ext, std::abs(support(k, v) - s.dot(v)));
        }
        if (asym <= 1e-9 * std::max(1.0, ext)) j["composite_fit"]["note"] = "body is centrally symmetric: only c2 + c3 is determined";
      }
      out.emit(j);
    } else if (*ver) {
      SuiteConfig cfg;
      cfg.seed = seed;
      const SuiteReport r = run_named_suite(suite, cfg);
      const Json j = io::report_to_json(r);
      if (!json_path.empty()) io::write_file(json_path, j.dump(2) + "\n");
      for (const auto& a : r.reports) {
        const char* status = a.skipped ? "skip" : a.passed() ? "pass" : "FAIL";
        std::printf("%-4s %-22s %-13s n=%d trials=%-4d max_residual=%.3g tol=%.3g\n", status, a.operator_name.c_str(),
                    a.axiom.c_str(), a.dim, a.trials, a.max_residual, a.tolerance);
      }
      int failing = 0;
      for (const auto& a : r.reports) failing += a.passed() ? 0 : 1;
      std::printf("%s: %d failing check(s), %d failing trial(s)\n", r.suite.c_str(), failing, r.failures());
      if (json_path.empty() && !out.path.empty()) out.emit(j);
      return r.passed() ? kOk : kFailures;
    }
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const MinkowskiConditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const io::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const KernelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
