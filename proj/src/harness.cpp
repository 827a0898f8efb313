#include "minkval/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "minkval/decomposition.hpp"
#include "minkval/kernels.hpp"

namespace minkval {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Polytope trial_body(Rng& rng, int n, const SuiteConfig& cfg) {
  std::uniform_int_distribution<int> m(cfg.min_vertices, cfg.max_vertices);
  return random_polytope(rng, n, m(rng));
}

struct Residual {
  double worst = 0;
  double scale = 1;
  void add(double diff, double ref) {
    worst = std::max(worst, std::abs(diff));
    scale = std::max(scale, std::abs(ref));
  }
  double value() const { return worst / scale; }
};

double valuation_residual(const OperatorHandle& phi, Rng& rng, int n, const SuiteConfig& cfg, const DirectionGrid& g) {
  for (int attempt = 0;; ++attempt) {
    const Polytope p = trial_body(rng, n, cfg);
    const Vec a = random_unit_vector(rng, n);
    Vec centroid = Vec::Zero(n);
    for (const auto& v : p.vertices()) centroid += v;
    centroid /= static_cast<double>(p.vertices().size());
    const double width = support(p, a) + support(p, -a);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    const double c = a.dot(centroid) + jitter(rng) * width;
    Split s;
    try {
      s = split_by_hyperplane(p, a, c);
    } catch (const GeometryError&) {
      // Degenerate split: resample, a bounded number of times.
      if (attempt >= 20) throw;
      continue;
    }
    const SupportFunction hp = phi.bind(p), hk = phi.bind(s.lower), hm = phi.bind(s.upper),
                          hi = phi.bind(s.intersection);
    Residual r;
    for (const auto& u : g.directions) {
      const double ref = hp(u);
      r.add(hk(u) + hm(u) - ref - hi(u), ref);
    }
    return r.value();
  }
}

TrialOutcome trial_body_checks(Axiom a, const OperatorHandle& phi, int n, std::uint64_t seed, const SuiteConfig& cfg,
                               int degree) {
  Rng rng(seed);
  const DirectionGrid g = sphere_grid(n, cfg.grid_resolution(n));
  const double tol = axiom_tolerance(a, phi, cfg);
  TrialOutcome out;
  switch (a) {
    case Axiom::valuation:
      out.residual = valuation_residual(phi, rng, n, cfg, g);
      break;
    case Axiom::translation: {
      const Polytope p = trial_body(rng, n, cfg);
      const Vec t = 2.0 * random_gaussian(rng, n);
      const SupportFunction h0 = phi.bind(p), h1 = phi.bind(translate(p, t));
      Residual r;
      for (const auto& u : g.directions) {
        const double ref = h0(u);
        r.add(h1(u) - ref, ref);
      }
      out.residual = r.value();
      break;
    }
    case Axiom::rotation: {
      const Polytope p = trial_body(rng, n, cfg);
      const Rotation th = random_rotation(rng, n);
      const Rotation inv = th.inverse();
      const SupportFunction h0 = phi.bind(p), h1 = phi.bind(apply_rotation(p, th));
      Residual r;
      for (const auto& u : g.directions) {
        const double ref = h0(inv * u);
        r.add(h1(u) - ref, ref);
      }
      out.residual = r.value();
      break;
    }
    case Axiom::homogeneity: {
      const Polytope p = trial_body(rng, n, cfg);
      std::uniform_real_distribution<double> loglam(std::log(0.1), std::log(10.0));
      const double lam = std::exp(loglam(rng));
      const double factor = std::pow(lam, degree);
      const SupportFunction h0 = phi.bind(p), h1 = phi.bind(scale(p, lam));
      Residual r;
      for (const auto& u : g.directions) {
        const double ref = factor * h0(u);
        r.add(h1(u) - ref, ref);
      }
      out.residual = r.value();
      break;
    }
    case Axiom::polytopal: {
      // Few vertices keep zonotopal outputs within the probe's point budget.
      std::uniform_int_distribution<int> m(n + 1, n + 3);
      const Polytope p = random_polytope(rng, n, m(rng));
      const SupportFunction h = phi.bind(p);
      const PolytopalVerdict v = polytopal_probe(h, n, n == 3 ? 10 : 5, cfg.tol_polytopal, seed);
      out.residual = std::max(v.fit_residual, v.certificate_gap) / v.scale;
      out.ok = v.polytopal;
      return out;
    }
    case Axiom::decomposition: {
      const Polytope k = trial_body(rng, n, cfg);
      std::uniform_real_distribution<double> coef(0.0, 2.0);
      const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
      const auto d = decompose(composite_operator(c1, c2, c3), k, g);
      const Zonotope z = projection_body(k);
      double top = 0, vanish = 0;
      for (std::size_t i = 0; i < g.size(); ++i) top = std::max(top, std::abs(d.components[n - 1].values[i] - c1 * z.support(g.directions[i])));
      for (int j = 0; j <= n; ++j)
        if (j != 1 && j != n - 1) vanish = std::max(vanish, d.components[j].norm);
      const CompositeFit fit = fit_composite(d, k);
      const double coeff = std::max(std::abs(fit.c2 - c2), std::abs(fit.c3 - c3));
      const double sub = std::max({0.0, d.components[1].max_violation, d.components[n - 1].max_violation});
      out.residual = std::max({top / cfg.tol_decomp_top, coeff / cfg.tol_decomp_coeff,
                               vanish / cfg.tol_decomp_vanish, sub / cfg.tol_sublinear});
      out.ok = out.residual <= 1.0;
      return out;
    }
  }
  out.ok = out.residual <= tol;
  return out;
}

AxiomReport run_check(Axiom a, const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg, int degree = 0) {
  AxiomReport rep;
  rep.axiom = axiom_name(a);
  rep.operator_name = phi.name;
  rep.dim = n;
  rep.trials = trials;
  rep.tolerance = axiom_tolerance(a, phi, cfg);
  std::vector<TrialOutcome> outcomes(std::max(trials, 0));
  std::vector<std::uint64_t> seeds(outcomes.size());
  for (int t = 0; t < trials; ++t) seeds[t] = trial_seed(cfg.seed, a, n, t);
  if (default_exec() == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < trials; ++t) outcomes[t] = run_trial(a, phi, n, seeds[t], cfg, degree);
  } else {
    for (int t = 0; t < trials; ++t) outcomes[t] = run_trial(a, phi, n, seeds[t], cfg, degree);
  }
  for (int t = 0; t < trials; ++t) {
    const auto& o = outcomes[t];
    rep.max_residual = std::max(rep.max_residual, o.residual);
    if (!o.ok) {
      rep.failures.push_back({seeds[t], o.residual});
      if (!o.error.empty() && rep.note.empty()) rep.note = o.error;
    }
  }
  return rep;
}

}  // namespace

std::string axiom_name(Axiom a) {
  switch (a) {
    case Axiom::valuation: return "valuation";
    case Axiom::translation: return "translation_invariance";
    case Axiom::rotation: return "rotation_equivariance";
    case Axiom::homogeneity: return "homogeneity";
    case Axiom::polytopal: return "polytope_output";
    case Axiom::decomposition: return "decomposition_roundtrip";
  }
  return "unknown";
}

void SuiteConfig::validate() const {
  const bool counts = valuation_trials >= 0 && translation_trials >= 0 && rotation_trials >= 0 &&
                      homogeneity_trials >= 0 && polytopal_trials >= 0 && decomposition_trials >= 0 &&
                      grid_resolution_3d >= 2 && grid_resolution_4d >= 2 && min_vertices >= 5 &&
                      max_vertices >= min_vertices && trials_4d_fraction > 0;
  const bool tols = tol_exact > 0 && tol_steiner > 0 && tol_polytopal > 0 && tol_decomp_top > 0 &&
                    tol_decomp_coeff > 0 && tol_decomp_vanish > 0 && tol_sublinear > 0;
  if (!counts) throw std::invalid_argument("suite config: counts must be positive");
  if (!tols) throw std::invalid_argument("suite config: tolerances must be positive");
  for (int n : dims)
    if (n != 3 && n != 4) throw std::invalid_argument("suite config: dimensions must be 3 or 4");
}

int SuiteConfig::trials_for(int base, int n) const {
  if (n == 3 || base == 0) return base;
  return std::max(1, static_cast<int>(std::lround(base * trials_4d_fraction)));
}

int SuiteConfig::grid_resolution(int n) const { return n == 3 ? grid_resolution_3d : grid_resolution_4d; }

std::uint64_t trial_seed(std::uint64_t suite_seed, Axiom a, int n, int t) {
  std::uint64_t x = splitmix64(suite_seed);
  x = splitmix64(x ^ (static_cast<std::uint64_t>(a) + 1) * 0x100000001b3ULL);
  x = splitmix64(x ^ static_cast<std::uint64_t>(n) << 32);
  return splitmix64(x ^ static_cast<std::uint64_t>(t));
}

double axiom_tolerance(Axiom a, const OperatorHandle& phi, const SuiteConfig& cfg) {
  switch (a) {
    case Axiom::polytopal: return cfg.tol_polytopal;
    case Axiom::decomposition: return 1.0;
    default: return phi.claims.steiner_dependent ? cfg.tol_steiner : cfg.tol_exact;
  }
}

TrialOutcome run_trial(Axiom a, const OperatorHandle& phi, int n, std::uint64_t seed, const SuiteConfig& cfg,
                       int degree) {
  try {
    return trial_body_checks(a, phi, n, seed, cfg, degree);
  } catch (const std::exception& e) {
    TrialOutcome out;
    out.residual = std::numeric_limits<double>::infinity();
    out.ok = false;
    out.error = e.what();
    return out;
  }
}

AxiomReport check_valuation(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg) {
  return run_check(Axiom::valuation, phi, n, trials, cfg);
}
AxiomReport check_translation_invariance(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg) {
  return run_check(Axiom::translation, phi, n, trials, cfg);
}
AxiomReport check_rotation_equivariance(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg) {
  return run_check(Axiom::rotation, phi, n, trials, cfg);
}
AxiomReport check_homogeneity(const OperatorHandle& phi, int n, int degree, int trials, const SuiteConfig& cfg) {
  if (degree < 0 || degree > n) throw std::invalid_argument("check_homogeneity: degree must be in 0..n");
  AxiomReport r = run_check(Axiom::homogeneity, phi, n, trials, cfg, degree);
  r.note = "degree " + std::to_string(degree);
  return r;
}
AxiomReport check_polytope_output(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg) {
  return run_check(Axiom::polytopal, phi, n, trials, cfg);
}
AxiomReport check_decomposition_roundtrip(int n, int trials, const SuiteConfig& cfg) {
  OperatorHandle tag;
  tag.name = "composite(random)";
  return run_check(Axiom::decomposition, tag, n, trials, cfg);
}

int SuiteReport::failures() const {
  int f = 0;
  for (const auto& r : reports) f += static_cast<int>(r.failures.size());
  return f;
}

SuiteReport run_suite(const std::string& name, const std::vector<OperatorHandle>& ops, const SuiteConfig& cfg,
                      bool roundtrip) {
  cfg.validate();
  SuiteReport out;
  out.suite = name;
  out.seed = cfg.seed;
  auto skipped = [](Axiom a, const OperatorHandle& phi, int n, std::string why) {
    AxiomReport r;
    r.axiom = axiom_name(a);
    r.operator_name = phi.name;
    r.dim = n;
    r.skipped = true;
    r.note = std::move(why);
    return r;
  };
  for (int n : cfg.dims) {
    for (const auto& phi : ops) {
      const auto& c = phi.claims;
      out.reports.push_back(c.valuation ? check_valuation(phi, n, cfg.trials_for(cfg.valuation_trials, n), cfg)
                                        : skipped(Axiom::valuation, phi, n, "not claimed"));
      out.reports.push_back(c.translation_invariant
                                ? check_translation_invariance(phi, n, cfg.trials_for(cfg.translation_trials, n), cfg)
                                : skipped(Axiom::translation, phi, n, "not claimed"));
      out.reports.push_back(c.rotation_equivariant
                                ? check_rotation_equivariance(phi, n, cfg.trials_for(cfg.rotation_trials, n), cfg)
                                : skipped(Axiom::rotation, phi, n, "not claimed"));
      const auto deg = c.degree(n);
      out.reports.push_back(deg ? check_homogeneity(phi, n, *deg, cfg.trials_for(cfg.homogeneity_trials, n), cfg)
                                : skipped(Axiom::homogeneity, phi, n, "no single degree claimed"));
      out.reports.push_back(c.polytopal ? check_polytope_output(phi, n, cfg.trials_for(cfg.polytopal_trials, n), cfg)
                                        : skipped(Axiom::polytopal, phi, n, "not claimed"));
    }
    if (roundtrip) out.reports.push_back(check_decomposition_roundtrip(n, cfg.trials_for(cfg.decomposition_trials, n), cfg));
  }
  return out;
}

SuiteReport run_named_suite(const std::string& name, const SuiteConfig& cfg) {
  const std::vector<OperatorHandle> base{projection_operator(), identity_operator(), neg_identity_operator(),
                                         composite_operator(1, 1, 1)};
  if (name == "default") return run_suite(name, base, cfg, true);
  if (name == "empty") return run_suite(name, {}, cfg, false);
  if (name == "broken")
    return run_suite(name, {volume_scaled_operator(), raw_identity_operator(), volume_ball_operator()}, cfg, false);
  if (name == "extended") {
    std::vector<OperatorHandle> ops = base;
    ops.push_back(bm_homomorphism(KernelPair::projection()));
    SuiteReport out = run_suite(name, ops, cfg, true);
    SuiteConfig only3 = cfg;
    only3.dims = {3};
    if (std::find(cfg.dims.begin(), cfg.dims.end(), 3) != cfg.dims.end()) {
      const SuiteReport extra = run_suite(name, {projection_order1_operator()}, only3, false);
      out.reports.insert(out.reports.end(), extra.reports.begin(), extra.reports.end());
    }
    return out;
  }
  throw std::invalid_argument("unknown suite '" + name + "' (expected default, broken, extended or empty)");
}

OperatorHandle volume_scaled_operator() {
  OperatorHandle h;
  h.name = "volume_scaled";
  h.bind = [](const Polytope& p) -> SupportFunction {
    const double v = p.full_dimensional() ? volume(p) : 0.0;
    const Vec s = steiner_point_exact(p);
    const std::vector<Vec> verts = p.vertices();
    return [v, s, verts](const Vec& u) { return v * (support(std::span<const Vec>(verts), u) - s.dot(u)); };
  };
  h.claims.steiner_dependent = true;
  return h;
}

OperatorHandle raw_identity_operator() {
  OperatorHandle h;
  h.name = "raw_identity";
  h.bind = [](const Polytope& p) -> SupportFunction {
    const std::vector<Vec> verts = p.vertices();
    return [verts](const Vec& u) { return support(std::span<const Vec>(verts), u); };
  };
  h.claims.degree = [](int) { return std::optional<int>(1); };
  return h;
}

OperatorHandle volume_ball_operator() {
  OperatorHandle h;
  h.name = "volume_ball";
  h.bind = [](const Polytope& p) -> SupportFunction {
    const double v = p.full_dimensional() ? volume(p) : 0.0;
    return [v](const Vec& u) { return v * u.norm(); };
  };
  h.claims.degree = [](int n) { return std::optional<int>(n); };
  return h;
}

}  // namespace minkval
