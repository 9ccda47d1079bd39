#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "goest/assembly.hpp"
#include "goest/functional.hpp"
#include "goest/mesh.hpp"
#include "goest/space.hpp"

namespace goest {

/// Closed-form solution u of the primal problem with its first and second
/// derivatives. gradient[k] = grad u_k; hessian[k] = {u_k,xx, u_k,xy, u_k,yx, u_k,yy}.
struct ExactSolution {
  VectorField value;
  std::function<std::array<Point, 2>(const Point&)> gradient;
  std::function<std::array<std::array<double, 4>, 2>(const Point&)> hessian;
};

/// A manufactured primal problem on (0,1)^d with homogeneous Dirichlet data.
struct Problem {
  std::string id;
  int dim = 1;
  int components = 1;
  FormDef form;
  LoadDef load;
  ExactSolution exact;
  double energy = 0.0;  // B(u, u), closed form
};

const std::vector<Problem>& problem_library();
const Problem& find_problem(const std::string& id);

struct Scenario {
  std::string name;
  std::string description;
  std::string problem_id;
  int dim = 1;
  int components = 1;
  FormDef form;
  LoadDef load;
  std::optional<ExactSolution> exact;
  /// J(u) in closed form when known.
  std::optional<double> exact_functional;

  FunctionalDef functional;
  std::string weight_id;  // LinearQoi weight: "source" (q = f) or "one"

  int base_size = 8;
  int degree = 1;
  Enrichment enrichment = Enrichment::HRefine;
  int levels = 4;
  std::optional<Box> subdomain;
  double solver_tolerance = 1e-12;
  int s_points = 5;
};

/// Assembles a scenario from a library problem; fills exact_functional from
/// closed forms where available, otherwise from functional_by_quadrature.
struct ScenarioSpec {
  std::string name;
  std::string problem_id;
  FunctionalKind kind = FunctionalKind::Energy;
  GFunction g;
  std::string weight_id = "source";
  int base_size = 8;
  int degree = 1;
  Enrichment enrichment = Enrichment::HRefine;
  int levels = 4;
  std::optional<Box> subdomain;
  double solver_tolerance = 1e-12;
  int s_points = 5;
  std::string description;
};

Scenario make_scenario(const ScenarioSpec& spec);

std::vector<Scenario> builtin_scenarios();
std::optional<Scenario> find_builtin(const std::string& name);

/// Parses a JSON scenario document; unknown keys raise std::invalid_argument.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario scenario_from_file(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& s);

std::string to_string(Enrichment e);
Enrichment enrichment_from_string(const std::string& s);

/// Strong-form residual of the exact solution at x: -div(flux(u)) - f.
std::array<double, 2> strong_residual(const Scenario& s, const Point& x);

/// Max |strong residual| over n_samples fixed interior points.
double max_strong_residual(const Scenario& s, int n_samples = 50);

/// J applied to the closed-form field by high-order quadrature on a uniform
/// mesh with n_per_side cells per direction.
double functional_by_quadrature(const Scenario& s, int n_per_side = 16);

/// Level-l mesh of the scenario (base mesh refined l times, subdomain tagged).
Mesh scenario_mesh(const Scenario& s, int level);

}  // namespace goest
