#include "minkval/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace minkval::io {
namespace {

Json residual_json(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InputError(msg);
}

int dim_from(const Json& j, const std::string& what) {
  require(j.is_object(), what + ": expected a JSON object");
  require(j.contains("dim") && j["dim"].is_number_integer(), what + ": missing integer field \"dim\"");
  const int n = j["dim"].get<int>();
  require(n >= 1 && n <= 4, what + ": \"dim\" must be between 1 and 4");
  return n;
}

// Counter-clockwise order of a facet's vertices seen from outside.
std::vector<int> oriented_face(const Polytope& p, const Facet& f) {
  Vec c = Vec::Zero(3);
  for (int v : f.vertices) c += p.vertices()[v];
  c /= static_cast<double>(f.vertices.size());
  const Mat basis = orthogonal_complement(f.normal);
  Eigen::Vector3d e1 = basis.col(0), e2 = basis.col(1);
  if (e1.cross(e2).dot(Eigen::Vector3d(f.normal)) < 0) std::swap(e1, e2);
  std::vector<std::pair<double, int>> order;
  for (int v : f.vertices) {
    const Eigen::Vector3d d = Eigen::Vector3d(p.vertices()[v] - c);
    order.push_back({std::atan2(d.dot(e2), d.dot(e1)), v});
  }
  std::sort(order.begin(), order.end());
  std::vector<int> out;
  for (const auto& o : order) out.push_back(o.second);
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(what + ": invalid JSON (" + std::string(e.what()) + ")");
  }
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const Json& j, int dim, const std::string& what) {
  require(j.is_array() && static_cast<int>(j.size()) == dim,
          what + ": expected an array of " + std::to_string(dim) + " numbers");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    require(j[i].is_number(), what + ": non-numeric coordinate");
    v(i) = j[i].get<double>();
    require(std::isfinite(v(i)), what + ": non-finite coordinate");
  }
  return v;
}

Json polytope_to_json(const Polytope& p) {
  Json j;
  j["dim"] = p.ambient_dim();
  Json verts = Json::array();
  for (const auto& v : p.vertices()) verts.push_back(vec_to_json(v));
  j["vertices"] = verts;
  return j;
}

Polytope polytope_from_json(const Json& j) {
  const int n = dim_from(j, "polytope");
  require(j.contains("vertices") && j["vertices"].is_array() && !j["vertices"].empty(),
          "polytope: missing non-empty array \"vertices\"");
  std::vector<Vec> pts;
  for (const auto& v : j["vertices"]) pts.push_back(vec_from_json(v, n, "polytope vertex"));
  try {
    return convex_hull(pts);
  } catch (const GeometryError& e) {
    throw InputError(std::string("polytope: ") + e.what());
  }
}

Json measure_to_json(const DiscreteSphereMeasure& mu) {
  Json j;
  j["dim"] = mu.dim();
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) atoms.push_back(Json{{"u", vec_to_json(a.u)}, {"w", a.w}});
  j["atoms"] = atoms;
  return j;
}

DiscreteSphereMeasure measure_from_json(const Json& j) {
  const int n = dim_from(j, "measure");
  require(j.contains("atoms") && j["atoms"].is_array(), "measure: missing array \"atoms\"");
  DiscreteSphereMeasure mu(n);
  for (const auto& a : j["atoms"]) {
    require(a.is_object() && a.contains("u") && a.contains("w"), "measure: atoms need \"u\" and \"w\"");
    const Vec u = vec_from_json(a["u"], n, "measure atom");
    require(a["w"].is_number(), "measure: atom weight must be a number");
    const double w = a["w"].get<double>();
    require(std::isfinite(w) && w > 0, "measure: atom weights must be positive");
    require(u.norm() > 0, "measure: atom direction must be nonzero");
    mu.add(u, w);
  }
  return mu;
}

Json zonotope_to_json(const Zonotope& z) {
  Json j;
  j["dim"] = z.dim();
  j["center"] = vec_to_json(z.center);
  Json g = Json::array();
  for (const auto& v : z.generators) g.push_back(vec_to_json(v));
  j["generators"] = g;
  return j;
}

Zonotope zonotope_from_json(const Json& j) {
  const int n = dim_from(j, "zonotope");
  require(j.contains("center") && j.contains("generators") && j["generators"].is_array(),
          "zonotope: needs \"center\" and array \"generators\"");
  Zonotope z;
  z.center = vec_from_json(j["center"], n, "zonotope center");
  for (const auto& g : j["generators"]) z.generators.push_back(vec_from_json(g, n, "zonotope generator"));
  return z;
}

KernelPair kernel_from_json(const Json& j) {
  require(j.is_object(), "kernel: expected a JSON object");
  if (j.contains("name")) {
    require(j["name"].is_string(), "kernel: \"name\" must be a string");
    const std::string name = j["name"].get<std::string>();
    if (name == "projection") return KernelPair::projection();
    if (name == "zero") return KernelPair::zero();
    throw InputError("kernel: unknown name '" + name + "' (expected projection or zero)");
  }
  require(j.contains("cheb_p") && j.contains("cheb_q"), "kernel: needs \"name\" or \"cheb_p\" and \"cheb_q\"");
  auto values = [](const Json& a, const std::string& key) {
    require(a.is_array() && a.size() >= 2, "kernel: \"" + key + "\" needs at least two values");
    std::vector<double> v;
    for (const auto& x : a) {
      require(x.is_number(), "kernel: non-numeric value in \"" + key + "\"");
      v.push_back(x.get<double>());
    }
    return v;
  };
  return KernelPair::from_chebyshev(values(j["cheb_p"], "cheb_p"), values(j["cheb_q"], "cheb_q"));
}

Json report_to_json(const SuiteReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  j["failure_count"] = r.failures();
  Json checks = Json::array();
  for (const auto& a : r.reports) {
    Json c;
    c["operator"] = a.operator_name;
    c["axiom"] = a.axiom;
    c["dim"] = a.dim;
    c["skipped"] = a.skipped;
    c["trials"] = a.trials;
    c["tolerance"] = a.tolerance;
    c["max_residual"] = residual_json(a.max_residual);
    Json f = Json::array();
    for (const auto& x : a.failures) f.push_back(Json{{"seed", x.seed}, {"residual", residual_json(x.residual)}});
    c["failures"] = f;
    if (!a.note.empty()) c["note"] = a.note;
    checks.push_back(c);
  }
  j["checks"] = checks;
  return j;
}

Json decomposition_to_json(const HomogeneousDecomposition& d, const CompositeFit* fit) {
  Json j;
  j["dim"] = d.n;
  Json dirs = Json::array();
  for (const auto& u : d.grid.directions) dirs.push_back(vec_to_json(u));
  j["directions"] = dirs;
  j["measured"] = d.measured;
  j["reconstruction_residual"] = d.reconstruction_residual;
  Json comps = Json::array();
  for (const auto& c : d.components) {
    comps.push_back(Json{{"degree", c.degree},
                         {"norm", c.norm},
                         {"max_violation", c.max_violation},
                         {"sublinear", c.sublinear},
                         {"values", c.values}});
  }
  j["components"] = comps;
  if (fit) j["composite_fit"] = Json{{"c1", fit->c1}, {"c2", fit->c2}, {"c3", fit->c3}};
  return j;
}

Json solve_report_to_json(const SolveReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["final_residual"] = r.final_residual;
  if (!r.polytope.vertices().empty()) j["polytope"] = polytope_to_json(r.polytope);
  return j;
}

std::string polytope_to_off(const Polytope& p) {
  if (p.ambient_dim() != 3 || !p.full_dimensional()) throw GeometryError("OFF export needs a full-dimensional 3-polytope");
  std::ostringstream out;
  out.precision(17);
  out << "OFF\n" << p.vertices().size() << ' ' << p.facets().size() << " 0\n";
  for (const auto& v : p.vertices()) out << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
  for (const auto& f : p.facets()) {
    const auto loop = oriented_face(p, f);
    out << loop.size();
    for (int v : loop) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

Polytope polytope_from_off(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  require(static_cast<bool>(in >> head) && head == "OFF", "OFF: missing header");
  long nv = 0, nf = 0, ne = 0;
  require(static_cast<bool>(in >> nv >> nf >> ne) && nv > 0 && nf >= 0, "OFF: bad counts line");
  std::vector<Vec> pts;
  for (long i = 0; i < nv; ++i) {
    double x, y, z;
    require(static_cast<bool>(in >> x >> y >> z), "OFF: truncated vertex list");
    pts.push_back(make_vec({x, y, z}));
  }
  try {
    return convex_hull(pts);
  } catch (const GeometryError& e) {
    throw InputError(std::string("OFF: ") + e.what());
  }
}

Polytope load_polytope(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".off") return polytope_from_off(text);
  return polytope_from_json(parse_json(text, path));
}

}  // namespace minkval::io
