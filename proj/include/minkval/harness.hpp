#pragma once

// Property-fuzzing checks of operator handles against the valuation axioms:
// hyperplane-split identity, translation invariance, rotation equivariance,
// homogeneity and polytope-to-polytope behaviour. Every trial draws its data
// from its own seed, so a failure can be replayed in isolation and parallel
// and serial runs agree exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "minkval/operators.hpp"

namespace minkval {

enum class Axiom { valuation, translation, rotation, homogeneity, polytopal, decomposition };

std::string axiom_name(Axiom a);

struct TrialFailure {
  std::uint64_t seed = 0;
  double residual = 0;
};

struct AxiomReport {
  std::string axiom;
  std::string operator_name;
  int dim = 0;
  int trials = 0;
  double tolerance = 0;
  double max_residual = 0;
  std::vector<TrialFailure> failures;
  bool skipped = false;
  std::string note;

  bool passed() const { return failures.empty(); }
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::vector<int> dims{3, 4};
  int valuation_trials = 200;
  int translation_trials = 100;
  int rotation_trials = 100;
  int homogeneity_trials = 100;
  int polytopal_trials = 10;
  int decomposition_trials = 20;
  /// Trials in R^4 are this fraction of the R^3 counts (at least one).
  double trials_4d_fraction = 0.25;
  int grid_resolution_3d = 12;
  int grid_resolution_4d = 5;
  int min_vertices = 6;
  int max_vertices = 12;
  double tol_exact = 1e-8;   // operators built from facet data alone
  double tol_steiner = 1e-5; // operators involving the Steiner point
  double tol_polytopal = 1e-6;
  double tol_decomp_top = 1e-6;    // f_{n-1} against c1 h(Pi K, .)
  double tol_decomp_coeff = 1e-5;  // recovered c2, c3
  double tol_decomp_vanish = 1e-7; // degrees other than 1 and n-1
  double tol_sublinear = 1e-8;     // violation of f_1 and f_{n-1}

  /// Throws std::invalid_argument for nonpositive counts or tolerances.
  void validate() const;
  int trials_for(int base, int n) const;
  int grid_resolution(int n) const;
};

/// Seed of trial `t` of a check; a pure function of its arguments.
std::uint64_t trial_seed(std::uint64_t suite_seed, Axiom a, int n, int t);

struct TrialOutcome {
  double residual = 0;
  bool ok = true;
  std::string error; // exception text if the operator threw
};

/// One trial. Residuals are relative to max(1, sup |h|) of the reference
/// values over the grid; for Axiom::polytopal the residual is the probe's fit
/// residual and ok is the verdict. `degree` is used by Axiom::homogeneity.
/// Exceptions from the operator are caught and reported as failed trials.
TrialOutcome run_trial(Axiom a, const OperatorHandle& phi, int n, std::uint64_t seed, const SuiteConfig& cfg,
                       int degree = 0);

double axiom_tolerance(Axiom a, const OperatorHandle& phi, const SuiteConfig& cfg);

AxiomReport check_valuation(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg);
AxiomReport check_translation_invariance(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg);
AxiomReport check_rotation_equivariance(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg);
AxiomReport check_homogeneity(const OperatorHandle& phi, int n, int degree, int trials, const SuiteConfig& cfg);
AxiomReport check_polytope_output(const OperatorHandle& phi, int n, int trials, const SuiteConfig& cfg);

/// Composite operators with random nonnegative weights: decompose, identify
/// the weights, and require the remaining degrees to vanish. The residual is
/// the largest of the three error measures, each divided by its tolerance,
/// so the report tolerance is 1.
AxiomReport check_decomposition_roundtrip(int n, int trials, const SuiteConfig& cfg);

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<AxiomReport> reports;

  int failures() const;
  bool passed() const { return failures() == 0; }
};

/// All axiom checks for every operator and dimension in cfg; a check whose
/// claim the operator does not make (e.g. no single degree) is recorded as
/// skipped. `roundtrip` adds the decomposition check per dimension.
SuiteReport run_suite(const std::string& name, const std::vector<OperatorHandle>& ops, const SuiteConfig& cfg,
                      bool roundtrip = false);

/// Named suites: "default" (Pi, I, -I, composite(1,1,1) and the decomposition
/// round trip), "broken" (constructed counterexamples), "extended" (default
/// plus Pi_1 in R^3 and the projection-kernel homomorphism), "empty".
SuiteReport run_named_suite(const std::string& name, const SuiteConfig& cfg);

/// Constructed counterexamples. Their claims are those of a well-behaved
/// operator, so the harness must catch them.
OperatorHandle volume_scaled_operator(); // P -> V(P) P, not a valuation
OperatorHandle raw_identity_operator();  // P -> P, not translation invariant
OperatorHandle volume_ball_operator();   // P -> V(P) B, not polytopal

}  // namespace minkval
