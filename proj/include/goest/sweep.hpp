#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goest/estimator.hpp"
#include "goest/scenario.hpp"

namespace goest {

/// Raised by run_scenario; the message names the scenario and level.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& scenario, int level, const std::string& what);
  const std::string& scenario() const { return scenario_; }
  int level() const { return level_; }

 private:
  std::string scenario_;
  int level_;
};

struct LevelReport {
  int level = 0;
  double h = 0.0;
  int n_dofs = 0;
  int n_dofs_plus = 0;
  double J_uh = 0.0;
  double J_uplus = 0.0;
  EstimateReport estimate;
  /// Relative Galerkin orthogonality defect of u+ - u_h against V_h.
  double orthogonality_defect = 0.0;
  /// |J(u) - J(u_h)| <= |eta1| / (1 - b_h) + 1e-9; empty without b_h < 1.
  std::optional<bool> reliability_ok;

  bool operator==(const LevelReport&) const = default;
};

struct SweepReport {
  std::string scenario;
  std::string problem;
  std::string functional;
  std::string enrichment;
  int dim = 1;
  int degree = 1;
  int base_size = 1;
  std::optional<double> J_exact;
  std::vector<LevelReport> levels;
  /// Least-squares slopes of log|.| against log h.
  std::optional<double> rate_true_error;
  std::optional<double> rate_eta1;
  std::string verdict;

  bool operator==(const SweepReport&) const = default;
};

/// Runs every level of the scenario: V_h, V_h+, primal and adjoint solves,
/// eta1/eta2/eta3, effectivities, b_h and the collapse verdict.
SweepReport run_scenario(const Scenario& s);

/// |J(u) - J(u+)| / |J(u) - J(u_h)| per level; empty when J(u) is unknown or
/// |J(u) - J(u_h)| < 1e-13. Values >= 1 are kept (saturation violated).
std::vector<std::optional<double>> measure_saturation(const SweepReport& r);

/// Slope of the least-squares line through (log h, log|y|), skipping zero
/// entries; empty with fewer than two usable points.
std::optional<double> least_squares_rate(const std::vector<double>& h, const std::vector<double>& y);

/// |true_error| / max(|eta3|, machine epsilon) per level.
std::vector<double> collapse_ratios(const SweepReport& r);

/// True when there are at least 4 levels and the collapse ratio grows by at
/// least 10x from each level to the next.
bool collapse_surrogate_holds(const SweepReport& r);

/// COLLAPSE_CONFIRMED when the surrogate holds; COLLAPSE_AT_ROUNDOFF when
/// |eta3| <= 1e-9 max(1, |J(u_h)|) and |true_error| >= 1e-6 on every level
/// but the surrogate fails; NO_COLLAPSE otherwise; NOT_APPLICABLE without J(u).
std::string collapse_verdict(const SweepReport& r);

}  // namespace goest
