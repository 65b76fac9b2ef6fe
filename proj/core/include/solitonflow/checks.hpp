#pragma once

#include <string>
#include <vector>

#include "solitonflow/analyze.hpp"

namespace solitonflow::checks {

/// One verification suite: a named bundle of claims, each tagged with the
/// acceptance-criterion id it belongs to (claim names start with "A<k>.").
struct SuiteResult {
  std::string name;
  std::vector<ClaimFlag> claims;
  double wall_seconds = 0.0;

  bool pass() const;
};

/// Phase-space structure: stationary-point residuals, linearization
/// eigenvalues at P0, flow-invariance of the Lyapunov locus, and the
/// pointwise derivative identities (criterion 4).
SuiteResult suite_invariants();

/// Triple-warped reproduction: long reference run, first-integral and
/// monotonicity sweeps over random initial radii, and the z-system vs
/// phase-space oracle equivalence (criteria 1, 2, 3, 5).
SuiteResult suite_example1();

/// Ricci-flat flow: constraint drift, Lyapunov descent, convergence to E,
/// and conical growth of the reconstructed metric (criterion 6).
SuiteResult suite_ricci_flat();

/// Two-summands evidence runs over both orbit families (criterion 7).
SuiteResult suite_two_summands();

/// Integrator order by Richardson comparison (criterion 8).
SuiteResult suite_convergence_order();

std::vector<std::string> suite_names();

/// Run a suite by name; throws std::invalid_argument for unknown names.
SuiteResult run_suite(const std::string& name);

}  // namespace solitonflow::checks
