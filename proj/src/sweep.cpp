#include "goest/sweep.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace goest {

ScenarioError::ScenarioError(const std::string& scenario, int level, const std::string& what)
    : std::runtime_error("scenario '" + scenario + "' level " + std::to_string(level) + ": " + what),
      scenario_(scenario),
      level_(level) {}

namespace {

constexpr double kSaturationGuard = 1e-13;
constexpr double kReliabilitySlack = 1e-9;

std::optional<double> ratio(double num, std::optional<double> den) {
  if (!den || *den == 0.0) return std::nullopt;
  return num / *den;
}

LevelReport run_level(const Scenario& s, int level) {
  const SolverOptions opts{s.solver_tolerance, 0};
  const QuadRule s_rule = gauss_segment(s.s_points);

  auto mesh = std::make_shared<const Mesh>(scenario_mesh(s, level));
  const SpacePtr vh = build_space(mesh, s.degree, s.components);
  const auto [vplus, prolong] = enrich(vh, s.enrichment);

  const Discretization coarse = discretize(vh, s.form, s.load);
  const Discretization plus = discretize(vplus, s.form, s.load);
  const CoeffVec u_h = solve_primal(coarse, opts).u;
  const CoeffVec u_plus = solve_primal(plus, opts).u;
  const CoeffVec u_h_plus = prolong.apply(u_h);

  const Functional J_h(s.functional, vh);
  const Functional J_plus(s.functional, vplus);

  LevelReport r;
  r.level = level;
  r.h = 1.0 / (s.base_size * static_cast<double>(1 << level));
  r.n_dofs = vh->n_dofs();
  r.n_dofs_plus = vplus->n_dofs();
  r.J_uh = J_h.value(u_h);
  r.J_uplus = J_plus.value(u_plus);

  const AdjointSolution z_plus = solve_adjoint(J_plus, u_h_plus, plus, AdjointRole::Enriched, opts);
  const Eta1Result e1 = eta1(J_plus, plus, u_h_plus, u_plus, z_plus, s_rule);

  EstimateReport& est = r.estimate;
  est.eta1 = e1.eta1;
  est.eta3 = e1.eta3;
  est.remainder_enriched = e1.remainder;
  est.z_distance_to_Vh = z_distance_to_coarse(z_plus, plus, prolong, coarse, opts);
  r.orthogonality_defect = galerkin_orthogonality_defect(plus, prolong, u_h_plus, u_plus);

  if (auto witness = witness_adjoint(J_h, u_h, s.form)) {
    est.eta2 = eta2(coarse, u_h, *witness);
    est.eta2_source = AdjointRole::AnalyticWitness;
  } else {
    const SpacePtr vref = enrich(enrich(vplus, Enrichment::HRefine).first, Enrichment::HRefine).first;
    const Prolongation to_ref = interpolation_operator(vh, vref);
    const Discretization ref = discretize(vref, s.form, s.load);
    const Functional J_ref(s.functional, vref);
    const CoeffVec u_h_ref = to_ref.apply(u_h);
    const AdjointSolution z_ref = solve_adjoint(J_ref, u_h_ref, ref, AdjointRole::Reference, opts);
    est.eta2 = eta2(ref, u_h_ref, z_ref);
    est.eta2_source = AdjointRole::Reference;
    const CoeffVec u_ref = solve_primal(ref, opts).u;
    const CoeffVec e_ref{vref, u_ref.values - u_h_ref.values};
    est.remainder_reference = J_ref.remainder(u_h_ref, e_ref, s_rule);
  }

  if (s.exact_functional) {
    const double true_error = *s.exact_functional - r.J_uh;
    est.true_error = true_error;
    est.effectivity_eta1 = ratio(est.eta1, true_error);
    est.effectivity_eta2 = ratio(est.eta2, true_error);
    est.effectivity_eta3 = ratio(est.eta3, true_error);
    if (std::abs(true_error) >= kSaturationGuard) {
      const double b_h = std::abs(*s.exact_functional - r.J_uplus) / std::abs(true_error);
      est.b_h_measured = b_h;
      if (b_h < 1.0)
        r.reliability_ok = std::abs(true_error) <= std::abs(est.eta1) / (1.0 - b_h) + kReliabilitySlack;
    }
  }
  return r;
}

}  // namespace

SweepReport run_scenario(const Scenario& s) {
  SweepReport rep;
  rep.scenario = s.name;
  rep.problem = s.problem_id;
  rep.functional = to_string(s.functional.kind);
  rep.enrichment = to_string(s.enrichment);
  rep.dim = s.dim;
  rep.degree = s.degree;
  rep.base_size = s.base_size;
  rep.J_exact = s.exact_functional;

  for (int level = 0; level < s.levels; ++level) {
    try {
      rep.levels.push_back(run_level(s, level));
    } catch (const std::exception& e) {
      throw ScenarioError(s.name, level, e.what());
    }
  }

  std::vector<double> h, err, eta;
  for (const auto& l : rep.levels) {
    h.push_back(l.h);
    err.push_back(l.estimate.true_error.value_or(0.0));
    eta.push_back(l.estimate.eta1);
  }
  if (s.exact_functional) rep.rate_true_error = least_squares_rate(h, err);
  rep.rate_eta1 = least_squares_rate(h, eta);
  rep.verdict = collapse_verdict(rep);
  return rep;
}

std::vector<std::optional<double>> measure_saturation(const SweepReport& r) {
  std::vector<std::optional<double>> out;
  for (const auto& l : r.levels) {
    if (!r.J_exact || std::abs(*r.J_exact - l.J_uh) < kSaturationGuard) {
      out.push_back(std::nullopt);
      continue;
    }
    out.push_back(std::abs(*r.J_exact - l.J_uplus) / std::abs(*r.J_exact - l.J_uh));
  }
  return out;
}

std::optional<double> least_squares_rate(const std::vector<double>& h, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < h.size() && k < y.size(); ++k) {
    if (y[k] == 0.0 || h[k] <= 0.0) continue;
    const double lx = std::log(h[k]), ly = std::log(std::abs(y[k]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

std::vector<double> collapse_ratios(const SweepReport& r) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> out;
  for (const auto& l : r.levels)
    out.push_back(std::abs(l.estimate.true_error.value_or(0.0)) / std::max(std::abs(l.estimate.eta3), eps));
  return out;
}

bool collapse_surrogate_holds(const SweepReport& r) {
  const auto ratios = collapse_ratios(r);
  if (ratios.size() < 4) return false;
  for (std::size_t k = 1; k < ratios.size(); ++k)
    if (!(ratios[k] >= 10.0 * ratios[k - 1])) return false;
  return true;
}

std::string collapse_verdict(const SweepReport& r) {
  if (!r.J_exact || r.levels.empty()) return "NOT_APPLICABLE";
  if (collapse_surrogate_holds(r)) return "COLLAPSE_CONFIRMED";
  for (const auto& l : r.levels) {
    const double scale = std::max(1.0, std::abs(l.J_uh));
    if (std::abs(l.estimate.eta3) > 1e-9 * scale) return "NO_COLLAPSE";
    if (std::abs(l.estimate.true_error.value_or(0.0)) < 1e-6) return "NO_COLLAPSE";
  }
  return "COLLAPSE_AT_ROUNDOFF";
}

}  // namespace goest
