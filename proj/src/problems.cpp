#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "goest/scenario.hpp"

namespace goest {

namespace {

using std::numbers::pi;
using Hessian = std::array<std::array<double, 4>, 2>;

Problem poisson1d_one() {
  Problem p;
  p.id = "poisson1d-one";
  p.dim = 1;
  p.form = FormDef::poisson();
  p.load = {[](const Point&) { return std::array<double, 2>{1.0, 0.0}; }, 0, "f = 1"};
  p.exact.value = [](const Point& x) { return std::array<double, 2>{0.5 * x[0] * (1.0 - x[0]), 0.0}; };
  p.exact.gradient = [](const Point& x) { return std::array<Point, 2>{Point{0.5 - x[0], 0.0}, Point{}}; };
  p.exact.hessian = [](const Point&) { return Hessian{{{-1.0, 0.0, 0.0, 0.0}, {}}}; };
  p.energy = 1.0 / 12.0;
  return p;
}

Problem poisson1d_sin() {
  Problem p;
  p.id = "poisson1d-sin";
  p.dim = 1;
  p.form = FormDef::poisson();
  p.load = {[](const Point& x) { return std::array<double, 2>{std::sin(pi * x[0]), 0.0}; }, -1, "f = sin(pi x)"};
  p.exact.value = [](const Point& x) { return std::array<double, 2>{std::sin(pi * x[0]) / (pi * pi), 0.0}; };
  p.exact.gradient = [](const Point& x) {
    return std::array<Point, 2>{Point{std::cos(pi * x[0]) / pi, 0.0}, Point{}};
  };
  p.exact.hessian = [](const Point& x) { return Hessian{{{-std::sin(pi * x[0]), 0.0, 0.0, 0.0}, {}}}; };
  p.energy = 1.0 / (2.0 * pi * pi);
  return p;
}

Problem poisson2d_sin() {
  Problem p;
  p.id = "poisson2d-sin";
  p.dim = 2;
  p.form = FormDef::poisson();
  p.load = {[](const Point& x) {
              return std::array<double, 2>{2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]), 0.0};
            },
            -1, "f = 2 pi^2 sin(pi x) sin(pi y)"};
  p.exact.value = [](const Point& x) {
    return std::array<double, 2>{std::sin(pi * x[0]) * std::sin(pi * x[1]), 0.0};
  };
  p.exact.gradient = [](const Point& x) {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
    return std::array<Point, 2>{Point{pi * cx * sy, pi * sx * cy}, Point{}};
  };
  p.exact.hessian = [](const Point& x) {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
    const double xy = pi * pi * cx * cy;
    return Hessian{{{-pi * pi * sx * sy, xy, xy, -pi * pi * sx * sy}, {}}};
  };
  p.energy = pi * pi / 2.0;
  return p;
}

// u_1 = u_2 = sin(pi x) sin(pi y), plane strain, f = -div sigma(u).
Problem elasticity2d_sin() {
  constexpr double lambda = 1.0, mu = 1.0;
  Problem p;
  p.id = "elasticity2d-sin";
  p.dim = 2;
  p.components = 2;
  p.form = FormDef::elasticity(lambda, mu);
  p.load = {[](const Point& x) {
              const double s = std::sin(pi * x[0]) * std::sin(pi * x[1]);
              const double cc = std::cos(pi * x[0]) * std::cos(pi * x[1]);
              const double f = pi * pi * ((lambda + 3.0 * mu) * s - (lambda + mu) * cc);
              return std::array<double, 2>{f, f};
            },
            -1, "f = -div sigma(u), u_i = sin(pi x) sin(pi y)"};
  p.exact.value = [](const Point& x) {
    const double s = std::sin(pi * x[0]) * std::sin(pi * x[1]);
    return std::array<double, 2>{s, s};
  };
  p.exact.gradient = [](const Point& x) {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
    const Point g{pi * cx * sy, pi * sx * cy};
    return std::array<Point, 2>{g, g};
  };
  p.exact.hessian = [](const Point& x) {
    const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]);
    const double cx = std::cos(pi * x[0]), cy = std::cos(pi * x[1]);
    const std::array<double, 4> h{-pi * pi * sx * sy, pi * pi * cx * cy, pi * pi * cx * cy, -pi * pi * sx * sy};
    return Hessian{h, h};
  };
  p.energy = (lambda + 3.0 * mu) * pi * pi / 2.0;
  return p;
}

LoadDef unit_weight(int components) {
  return {[components](const Point&) { return std::array<double, 2>{1.0, components > 1 ? 1.0 : 0.0}; }, 0,
          "q = 1"};
}

// Closed-form J(u) for the functional, when one follows from the problem.
std::optional<double> closed_form_functional(const Problem& p, const ScenarioSpec& spec) {
  switch (spec.kind) {
    case FunctionalKind::Energy: return p.energy;
    case FunctionalKind::GEnergy: return spec.g.value(p.energy);
    case FunctionalKind::SqrtEnergy: return std::sqrt(p.energy);
    case FunctionalKind::LinearQoi:
      // int f . u = B(u, u) for the primal solution.
      if (spec.weight_id == "source") return p.energy;
      return std::nullopt;
    case FunctionalKind::LocalEnergy:
      // int_{[0,1/2]^2} |grad u|^2 for u = sin(pi x) sin(pi y).
      if (p.id == "poisson2d-sin" && spec.subdomain && spec.subdomain->lo == Point{0.0, 0.0} &&
          spec.subdomain->hi == Point{0.5, 0.5})
        return pi * pi / 8.0;
      return std::nullopt;
  }
  return std::nullopt;
}

// Deterministic low-discrepancy interior sample points.
Point sample_point(int k, int dim) {
  const double a = std::fmod(0.5 + k * 0.6180339887498949, 1.0);
  const double b = std::fmod(0.5 + k * 0.7548776662466927, 1.0);
  return {0.01 + 0.98 * a, dim == 2 ? 0.01 + 0.98 * b : 0.0};
}

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

}  // namespace

const std::vector<Problem>& problem_library() {
  static const std::vector<Problem> lib{poisson1d_one(), poisson1d_sin(), poisson2d_sin(), elasticity2d_sin()};
  return lib;
}

const Problem& find_problem(const std::string& id) {
  for (const auto& p : problem_library())
    if (p.id == id) return p;
  throw std::invalid_argument("unknown problem '" + id + "'");
}

std::string to_string(Enrichment e) { return e == Enrichment::HRefine ? "h" : "p"; }

Enrichment enrichment_from_string(const std::string& s) {
  if (s == "h") return Enrichment::HRefine;
  if (s == "p") return Enrichment::PIncrease;
  throw std::invalid_argument("enrichment must be 'h' or 'p', got '" + s + "'");
}

Scenario make_scenario(const ScenarioSpec& spec) {
  const Problem& p = find_problem(spec.problem_id);
  if (spec.base_size < 1) throw std::invalid_argument("base_size must be >= 1");
  if (spec.levels < 0) throw std::invalid_argument("levels must be >= 0");
  if (spec.degree != 1 && spec.degree != 2) throw std::invalid_argument("degree must be 1 or 2");
  if (spec.s_points < 1 || spec.s_points > 10) throw std::invalid_argument("s_points must be in 1..10");
  if (spec.kind == FunctionalKind::LocalEnergy && !spec.subdomain)
    throw std::invalid_argument("local_energy needs a subdomain box");

  Scenario s;
  s.name = spec.name;
  s.description = spec.description;
  s.problem_id = p.id;
  s.dim = p.dim;
  s.components = p.components;
  s.form = p.form;
  s.load = p.load;
  s.exact = p.exact;
  s.base_size = spec.base_size;
  s.degree = spec.degree;
  s.enrichment = spec.enrichment;
  s.levels = spec.levels;
  s.subdomain = spec.subdomain;
  s.solver_tolerance = spec.solver_tolerance;
  s.s_points = spec.s_points;
  s.weight_id = spec.weight_id;

  switch (spec.kind) {
    case FunctionalKind::LinearQoi:
      if (spec.weight_id == "source") s.functional = FunctionalDef::linear_qoi(p.load);
      else if (spec.weight_id == "one") s.functional = FunctionalDef::linear_qoi(unit_weight(p.components));
      else throw std::invalid_argument("unknown weight '" + spec.weight_id + "' (use 'source' or 'one')");
      break;
    case FunctionalKind::Energy: s.functional = FunctionalDef::energy(p.form); break;
    case FunctionalKind::GEnergy: s.functional = FunctionalDef::g_energy(p.form, spec.g); break;
    case FunctionalKind::SqrtEnergy: s.functional = FunctionalDef::sqrt_energy(p.form); break;
    case FunctionalKind::LocalEnergy: s.functional = FunctionalDef::local_energy(p.form); break;
  }
  s.exact_functional = closed_form_functional(p, spec);
  if (!s.exact_functional) s.exact_functional = functional_by_quadrature(s);
  return s;
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<ScenarioSpec> specs;
  auto add = [&](std::string name, std::string problem, FunctionalKind kind, int base, std::string description) {
    ScenarioSpec spec;
    spec.name = std::move(name);
    spec.problem_id = std::move(problem);
    spec.kind = kind;
    spec.base_size = base;
    spec.description = std::move(description);
    specs.push_back(std::move(spec));
    return &specs.back();
  };

  add("poisson1d-energy-f1", "poisson1d-one", FunctionalKind::Energy, 8, "1D Poisson, f = 1, J(u) = B(u,u)");
  add("poisson1d-energy-f1-p", "poisson1d-one", FunctionalKind::Energy, 8,
      "1D Poisson, f = 1, J(u) = B(u,u), order enrichment")
      ->enrichment = Enrichment::PIncrease;
  add("poisson1d-energy-sin", "poisson1d-sin", FunctionalKind::Energy, 8,
      "1D Poisson, f = sin(pi x), J(u) = B(u,u)");
  add("poisson2d-energy-sin", "poisson2d-sin", FunctionalKind::Energy, 4,
      "2D Poisson, u = sin(pi x) sin(pi y), J(u) = B(u,u)");
  add("poisson1d-sqrt-energy", "poisson1d-sin", FunctionalKind::SqrtEnergy, 8,
      "1D Poisson, f = sin(pi x), J(u) = sqrt(B(u,u))");
  add("poisson1d-genergy-pow2", "poisson1d-one", FunctionalKind::GEnergy, 8, "1D Poisson, f = 1, J(u) = B(u,u)^2")
      ->g = GFunction::power(2.0);
  add("elasticity2d-strain-energy", "elasticity2d-sin", FunctionalKind::SqrtEnergy, 4,
      "2D plane-strain elasticity, lambda = mu = 1, J(u) = sqrt(B(u,u))");
  add("poisson2d-local-energy", "poisson2d-sin", FunctionalKind::LocalEnergy, 4,
      "2D Poisson, energy restricted to [0,1/2]^2")
      ->subdomain = Box{{0.0, 0.0}, {0.5, 0.5}};
  add("poisson1d-linear-qoi", "poisson1d-sin", FunctionalKind::LinearQoi, 8,
      "1D Poisson, f = sin(pi x), J(u) = int f u")
      ->enrichment = Enrichment::PIncrease;

  std::vector<Scenario> out;
  for (const auto& spec : specs) out.push_back(make_scenario(spec));
  return out;
}

std::optional<Scenario> find_builtin(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  reject_unknown_keys(doc,
                      {"name", "description", "problem", "functional", "base_size", "degree", "enrichment", "levels",
                       "subdomain", "solver_tolerance", "s_points"},
                      "scenario");
  ScenarioSpec spec;
  spec.name = doc.value("name", std::string("custom"));
  spec.description = doc.value("description", std::string());
  if (!doc.contains("problem")) throw std::invalid_argument("scenario: missing 'problem'");
  spec.problem_id = doc.at("problem").get<std::string>();
  if (!doc.contains("functional")) throw std::invalid_argument("scenario: missing 'functional'");

  const auto& f = doc.at("functional");
  reject_unknown_keys(f, {"kind", "g", "exponent", "weight"}, "scenario.functional");
  spec.kind = functional_kind_from_string(f.at("kind").get<std::string>());
  if (spec.kind == FunctionalKind::GEnergy) {
    const std::string g = f.value("g", std::string("power"));
    if (g == "sqrt") spec.g = GFunction::sqrt();
    else if (g == "identity") spec.g = GFunction::identity();
    else if (g == "power") spec.g = GFunction::power(f.value("exponent", 2.0));
    else throw std::invalid_argument("scenario.functional: unknown g '" + g + "'");
  }
  spec.weight_id = f.value("weight", std::string("source"));

  spec.base_size = doc.value("base_size", spec.base_size);
  spec.degree = doc.value("degree", spec.degree);
  spec.enrichment = enrichment_from_string(doc.value("enrichment", std::string("h")));
  spec.levels = doc.value("levels", spec.levels);
  spec.solver_tolerance = doc.value("solver_tolerance", spec.solver_tolerance);
  spec.s_points = doc.value("s_points", spec.s_points);
  if (doc.contains("subdomain")) {
    const auto& b = doc.at("subdomain");
    reject_unknown_keys(b, {"lo", "hi"}, "scenario.subdomain");
    Box box;
    const auto lo = b.at("lo").get<std::vector<double>>();
    const auto hi = b.at("hi").get<std::vector<double>>();
    for (std::size_t k = 0; k < 2 && k < lo.size(); ++k) box.lo[k] = lo[k];
    for (std::size_t k = 0; k < 2 && k < hi.size(); ++k) box.hi[k] = hi[k];
    spec.subdomain = box;
  }
  return make_scenario(spec);
}

Scenario scenario_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json f{{"kind", to_string(s.functional.kind)}};
  if (s.functional.kind == FunctionalKind::GEnergy) {
    f["g"] = s.functional.g.kind == GKind::Sqrt ? "sqrt" : s.functional.g.kind == GKind::Power ? "power" : "identity";
    f["exponent"] = s.functional.g.exponent;
  }
  if (s.functional.kind == FunctionalKind::LinearQoi) f["weight"] = s.weight_id;
  nlohmann::json doc{{"name", s.name},
                     {"description", s.description},
                     {"problem", s.problem_id},
                     {"functional", f},
                     {"base_size", s.base_size},
                     {"degree", s.degree},
                     {"enrichment", to_string(s.enrichment)},
                     {"levels", s.levels},
                     {"solver_tolerance", s.solver_tolerance},
                     {"s_points", s.s_points}};
  if (s.subdomain)
    doc["subdomain"] = {{"lo", {s.subdomain->lo[0], s.subdomain->lo[1]}},
                        {"hi", {s.subdomain->hi[0], s.subdomain->hi[1]}}};
  return doc;
}

std::array<double, 2> strong_residual(const Scenario& s, const Point& x) {
  if (!s.exact) throw std::invalid_argument("strong_residual: scenario has no exact solution");
  const auto H = s.exact->hessian(x);
  const auto f = s.load.source(x);
  std::array<double, 2> r{};
  if (s.form.kind == FormKind::Poisson) {
    const double lap = s.dim == 1 ? H[0][0] : H[0][0] + H[0][3];
    r[0] = -lap - f[0];
    return r;
  }
  // (div sigma)_a = (lambda + mu) d_a(div u) + mu lap u_a
  const double lambda = s.form.lambda, mu = s.form.mu;
  for (int a = 0; a < s.dim; ++a) {
    double grad_div = 0.0;
    for (int c = 0; c < s.dim; ++c) grad_div += H[c][a * 2 + c];
    const double lap = s.dim == 1 ? H[a][0] : H[a][0] + H[a][3];
    r[a] = -((lambda + mu) * grad_div + mu * lap) - f[a];
  }
  return r;
}

double max_strong_residual(const Scenario& s, int n_samples) {
  double worst = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const auto r = strong_residual(s, sample_point(k, s.dim));
    for (int c = 0; c < s.components; ++c) worst = std::max(worst, std::abs(r[c]));
  }
  return worst;
}

double functional_by_quadrature(const Scenario& s, int n_per_side) {
  if (!s.exact) throw std::invalid_argument("functional_by_quadrature: scenario has no exact solution");
  Mesh m = s.dim == 1 ? build_unit_interval(n_per_side) : build_unit_square_tri(n_per_side);
  if (s.subdomain) m = tag_subdomain(m, *s.subdomain);
  const QuadRule rule = high_order_rule(s.dim);
  const auto& fd = s.functional;

  double energy = 0.0;
  double linear = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    if (fd.kind == FunctionalKind::LocalEnergy && m.cell_subdomain[c] != fd.subdomain_tag) continue;
    const CellGeometry geo(m, c);
    const double scale = geo.measure / reference_measure(s.dim);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& xi = rule.points[q];
      const std::array<double, 3> lambda =
          s.dim == 1 ? std::array<double, 3>{1.0 - xi[0], xi[0], 0.0}
                     : std::array<double, 3>{1.0 - xi[0] - xi[1], xi[0], xi[1]};
      const Point x = geo.map(lambda);
      const double w = rule.weights[q] * scale;
      if (fd.kind == FunctionalKind::LinearQoi) {
        const auto u = s.exact->value(x);
        const auto qv = fd.weight->source(x);
        for (int k = 0; k < s.components; ++k) linear += w * qv[k] * u[k];
        continue;
      }
      const auto g = s.exact->gradient(x);
      if (fd.form.kind == FormKind::Poisson) {
        energy += w * (g[0][0] * g[0][0] + g[0][1] * g[0][1]);
        continue;
      }
      double tr = 0.0, ee = 0.0;
      for (int a = 0; a < s.dim; ++a) {
        tr += g[a][a];
        for (int b = 0; b < s.dim; ++b) {
          const double e = 0.5 * (g[a][b] + g[b][a]);
          ee += e * e;
        }
      }
      energy += w * (fd.form.lambda * tr * tr + 2.0 * fd.form.mu * ee);
    }
  }
  switch (fd.kind) {
    case FunctionalKind::LinearQoi: return linear;
    case FunctionalKind::Energy:
    case FunctionalKind::LocalEnergy: return energy;
    case FunctionalKind::GEnergy:
    case FunctionalKind::SqrtEnergy: return fd.g.value(energy);
  }
  return energy;
}

Mesh scenario_mesh(const Scenario& s, int level) {
  Mesh m = s.dim == 1 ? build_unit_interval(s.base_size) : build_unit_square_tri(s.base_size);
  for (int l = 0; l < level; ++l) m = refine_uniform(m);
  if (s.subdomain) m = tag_subdomain(m, *s.subdomain);
  return m;
}

}  // namespace goest
