#include "goest/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "goest/report.hpp"

namespace goest {

namespace {

const std::vector<std::string> kWitnessScenarios{"poisson1d-energy-f1",   "poisson1d-energy-sin",
                                                 "poisson2d-energy-sin",  "poisson1d-sqrt-energy",
                                                 "poisson1d-genergy-pow2", "elasticity2d-strain-energy"};

double scale_of(double J) { return std::max(1.0, std::abs(J)); }

std::string key(const std::string& name, Enrichment e) { return name + "/" + to_string(e); }

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_sweeps(const std::map<std::string, SweepReport>& sweeps, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [k, r] : sweeps) emit_report(r, ReportFormat::Csv, dir / (r.scenario + "_" + r.enrichment + ".csv"));
}

// A functional on a small space, used for the random-field identities.
struct Probe {
  Functional J;
  SpacePtr space;
};

std::vector<Probe> probes() {
  auto interval = std::make_shared<const Mesh>(build_unit_interval(8));
  auto square = std::make_shared<const Mesh>(tag_subdomain(build_unit_square_tri(4), Box{{0.0, 0.0}, {0.5, 0.5}}));
  const SpacePtr p2 = build_space(interval, 2, 1);
  const SpacePtr scalar2d = build_space(square, 1, 1);
  const SpacePtr vector2d = build_space(square, 1, 2);
  const FormDef poisson = FormDef::poisson();
  const FormDef elastic = FormDef::elasticity(1.0, 1.0);
  const LoadDef weight = find_problem("poisson1d-sin").load;

  std::vector<Probe> out;
  out.push_back({Functional(FunctionalDef::linear_qoi(weight), p2), p2});
  out.push_back({Functional(FunctionalDef::energy(poisson), p2), p2});
  out.push_back({Functional(FunctionalDef::g_energy(poisson, GFunction::power(2.0)), p2), p2});
  out.push_back({Functional(FunctionalDef::sqrt_energy(elastic), vector2d), vector2d});
  out.push_back({Functional(FunctionalDef::local_energy(poisson), scalar2d), scalar2d});
  return out;
}

CoeffVec random_field(const SpacePtr& s, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  CoeffVec c = CoeffVec::zero(s);
  for (int i = 0; i < s->n_dofs(); ++i) c.values[i] = dist(rng);
  s->mask_dirichlet(c.values);
  return c;
}

CriterionResult error_representation(const std::map<std::string, SweepReport>& sweeps, double seconds) {
  CriterionResult c{1, "error representation eta1 = J(u+) - J(u_h)", true, {}};
  double worst = 0.0;
  std::string where;
  for (const auto& [k, r] : sweeps)
    for (const auto& l : r.levels) {
      const double dev = std::abs(l.estimate.eta1 - (l.J_uplus - l.J_uh)) / scale_of(l.J_uh);
      if (dev > worst) worst = dev, where = k + " level " + std::to_string(l.level);
    }
  c.passed = worst <= 1e-9 && seconds < 30.0;
  c.detail = "max scaled deviation " + real(worst) + (where.empty() ? "" : " at " + where) + ", sweeps took " +
             real(seconds) + " s";
  return c;
}

CriterionResult witness_collapse(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{2, "eta2 and eta3 vanish for witness-bearing functionals", true, {}};
  double worst2 = 0.0, worst3 = 0.0, min_true = INFINITY;
  for (const auto& name : kWitnessScenarios)
    for (auto e : {Enrichment::HRefine, Enrichment::PIncrease})
      for (const auto& l : sweeps.at(key(name, e)).levels) {
        const double s = scale_of(l.J_uh);
        worst2 = std::max(worst2, std::abs(l.estimate.eta2) / s);
        worst3 = std::max(worst3, std::abs(l.estimate.eta3) / s);
        min_true = std::min(min_true, std::abs(l.estimate.true_error.value_or(0.0)));
        if (l.estimate.eta2_source != AdjointRole::AnalyticWitness) c.passed = false;
      }
  c.passed = c.passed && worst2 <= 1e-10 && worst3 <= 1e-9 && min_true >= 1e-6;
  c.detail = "max |eta2| " + real(worst2) + ", max |eta3| " + real(worst3) + ", min |true_error| " + real(min_true);
  return c;
}

CriterionResult divergence_surrogate(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{3, "effectivity divergence surrogate (ratio grows >= 10x per level)", true, {}};
  for (const auto& name : kWitnessScenarios) {
    const auto& r = sweeps.at(key(name, Enrichment::HRefine));
    const auto ratios = collapse_ratios(r);
    double min_growth = INFINITY;
    for (std::size_t k = 1; k < ratios.size(); ++k) min_growth = std::min(min_growth, ratios[k] / ratios[k - 1]);
    if (r.verdict != "COLLAPSE_CONFIRMED") c.passed = false;
    if (!c.detail.empty()) c.detail += "; ";
    c.detail += name + " " + r.verdict + " (min growth " + real(min_growth) + ")";
  }
  return c;
}

CriterionResult closed_forms(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{4, "closed forms for poisson1d-energy-f1", true, {}};
  const auto& r = sweeps.at(key("poisson1d-energy-f1", Enrichment::HRefine));
  double worst = 0.0;
  for (const auto& l : r.levels) {
    const double expect = l.h * l.h / 12.0;
    worst = std::max(worst, std::abs(l.estimate.true_error.value_or(0.0) - expect) / expect);
  }
  const Scenario s = *find_builtin("poisson1d-energy-f1");
  const double J_quad = functional_by_quadrature(s);
  const double J_dev = std::abs(J_quad - 1.0 / 12.0);
  const double closed_dev = std::abs(s.exact_functional.value_or(NAN) - J_quad);
  c.passed = r.levels.size() == 4 && std::abs(r.levels.back().h - 1.0 / 64.0) < 1e-15 && worst <= 0.01 &&
             J_dev <= 1e-10 && closed_dev <= 1e-10;
  c.detail = "max rel. deviation from h^2/12 " + real(worst) + ", |J(u) - 1/12| " + real(J_dev);
  return c;
}

CriterionResult reliability(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{5, "eta1 reliability with constant 1/(1 - b_h)", true, {}};
  int checked = 0, failed = 0;
  for (const auto& [k, r] : sweeps)
    for (const auto& l : r.levels)
      if (l.reliability_ok) {
        ++checked;
        if (!*l.reliability_ok) ++failed;
      }
  double worst_b = 0.0, worst_eff = 0.0;
  for (const auto& l : sweeps.at(key("poisson1d-energy-f1", Enrichment::HRefine)).levels) {
    worst_b = std::max(worst_b, std::abs(l.estimate.b_h_measured.value_or(NAN) - 0.25));
    worst_eff = std::max(worst_eff, std::abs(l.estimate.effectivity_eta1.value_or(NAN) - 0.75));
  }
  double worst_p = 0.0;
  for (const auto& l : sweeps.at(key("poisson1d-energy-f1", Enrichment::PIncrease)).levels)
    worst_p = std::max(worst_p, std::abs(l.estimate.effectivity_eta1.value_or(NAN) - 1.0));
  c.passed = failed == 0 && checked > 0 && worst_b <= 0.02 && worst_eff <= 0.02 && worst_p <= 1e-8;
  c.detail = std::to_string(checked - failed) + "/" + std::to_string(checked) + " levels reliable; f1/h |b_h - 0.25| " +
             real(worst_b) + ", |eff1 - 0.75| " + real(worst_eff) + "; f1/p |eff1 - 1| " + real(worst_p);
  return c;
}

CriterionResult taylor_identity(const AcceptanceOptions& opts) {
  CriterionResult c{6, "Taylor identity with integral remainder", true, {}};
  std::mt19937_64 rng(opts.seed);
  const QuadRule s_rule = gauss_segment(10);
  double worst = 0.0;
  for (const auto& p : probes())
    for (int k = 0; k < opts.random_draws; ++k) {
      const CoeffVec u = random_field(p.space, rng, 1.0);
      const CoeffVec e = random_field(p.space, rng, 0.1);
      const CoeffVec ue{p.space, u.values + e.values};
      const double J0 = p.J.value(u), J1 = p.J.value(ue);
      const double lhs = J1 - J0;
      const double rhs = p.J.d1(u, e) + p.J.remainder(u, e, s_rule);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max({1.0, std::abs(J0), std::abs(J1)}));
    }
  c.passed = worst <= 1e-10;
  c.detail = std::to_string(opts.random_draws) + " pairs per kind, max scaled defect " + real(worst);
  return c;
}

CriterionResult derivative_oracles(const AcceptanceOptions& opts) {
  CriterionResult c{7, "analytic derivatives against central differences", true, {}};
  std::mt19937_64 rng(opts.seed + 1);
  double worst1 = 0.0, worst2 = 0.0;
  for (const auto& p : probes())
    for (int k = 0; k < opts.random_draws; ++k) {
      const CoeffVec u = random_field(p.space, rng, 1.0);
      const CoeffVec v = random_field(p.space, rng, 1.0);
      const CoeffVec w = random_field(p.space, rng, 1.0);
      const double eps = default_fd_epsilon(u);
      const double floor = 1e-8 * scale_of(p.J.value(u));
      const double d1 = p.J.d1(u, v), d2 = p.J.d2(u, v, w);
      worst1 = std::max(worst1, std::abs(d1 - fd_oracle_d1(p.J, u, v, eps)) / std::max(std::abs(d1), floor));
      worst2 = std::max(worst2, std::abs(d2 - fd_oracle_d2(p.J, u, v, w, eps)) / std::max(std::abs(d2), floor));
    }
  c.passed = worst1 <= 1e-6 && worst2 <= 1e-5;
  c.detail = "max rel. deviation J' " + real(worst1) + ", J'' " + real(worst2);
  return c;
}

CriterionResult orthogonality(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{8, "Galerkin orthogonality of u+ - u_h against V_h", true, {}};
  double worst = 0.0;
  std::string where;
  for (const auto& [k, r] : sweeps)
    for (const auto& l : r.levels)
      if (l.orthogonality_defect > worst) worst = l.orthogonality_defect, where = k;
  c.passed = worst <= 1e-9;
  c.detail = "max relative defect " + real(worst) + (where.empty() ? "" : " (" + where + ")");
  return c;
}

CriterionResult classical_dwr(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{9, "linear QoI eta3 effectivity near 1", true, {}};
  const Scenario s = *find_builtin("poisson1d-linear-qoi");
  const auto& r = sweeps.at(key(s.name, s.enrichment));
  const double eff = r.levels.empty() ? NAN : r.levels.back().estimate.effectivity_eta3.value_or(NAN);
  c.passed = eff >= 0.9 && eff <= 1.1;
  c.detail = "finest-level eff3 " + real(eff) + " (" + to_string(s.enrichment) + " enrichment)";
  return c;
}

CriterionResult local_energy(const std::map<std::string, SweepReport>& sweeps) {
  CriterionResult c{10, "local energy functional does not collapse", true, {}};
  double smallest = INFINITY;
  for (const auto& l : sweeps.at(key("poisson2d-local-energy", Enrichment::HRefine)).levels)
    smallest = std::min(smallest, std::abs(l.estimate.eta3));
  c.passed = smallest > 1e-6;
  c.detail = "min |eta3| " + real(smallest);
  return c;
}

CriterionResult determinism(const std::map<std::string, SweepReport>& sweeps, const std::filesystem::path& dir) {
  CriterionResult c{11, "repeated sweeps give byte-identical CSV", true, {}};
  const auto rerun_dir = dir / "rerun";
  write_sweeps(run_all_sweeps(), rerun_dir);
  int files = 0, differing = 0;
  for (const auto& [k, r] : sweeps) {
    const auto name = r.scenario + "_" + r.enrichment + ".csv";
    ++files;
    if (read_file(dir / name) != read_file(rerun_dir / name)) ++differing;
  }
  c.passed = differing == 0 && files > 0;
  c.detail = std::to_string(files - differing) + "/" + std::to_string(files) + " CSV files identical";
  return c;
}

}  // namespace

std::map<std::string, SweepReport> run_all_sweeps() {
  std::map<std::string, SweepReport> out;
  for (const auto& s : builtin_scenarios())
    for (auto e : {Enrichment::HRefine, Enrichment::PIncrease}) {
      Scenario v = s;
      v.enrichment = e;
      out.emplace(key(s.name, e), run_scenario(v));
    }
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto sweeps = run_all_sweeps();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_sweeps(sweeps, opts.out_dir);

  return {error_representation(sweeps, seconds),
          witness_collapse(sweeps),
          divergence_surrogate(sweeps),
          closed_forms(sweeps),
          reliability(sweeps),
          taylor_identity(opts),
          derivative_oracles(opts),
          orthogonality(sweeps),
          classical_dwr(sweeps),
          local_energy(sweeps),
          determinism(sweeps, opts.out_dir)};
}

int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out) {
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << ": " << r.detail << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed;
}

}  // namespace goest
