#pragma once

#include <optional>
#include <string>

#include "goest/assembly.hpp"
#include "goest/functional.hpp"
#include "goest/solver.hpp"
#include "goest/space.hpp"

namespace goest {

/// One space with the operators of the primal problem B(u, phi) = L(phi).
struct Discretization {
  SpacePtr space;
  FormDef form;
  SparseMatrix matrix;  // B without boundary conditions
  Vector load;          // L(phi_i) without boundary conditions
  SystemPair system;    // Dirichlet-constrained pair
};

Discretization discretize(SpacePtr space, const FormDef& form, const LoadDef& load);

struct PrimalSolution {
  CoeffVec u;
  SolveReport report;
};

PrimalSolution solve_primal(const Discretization& d, const SolverOptions& opts = {});

enum class AdjointRole { Coarse, Enriched, Reference, AnalyticWitness };

std::string to_string(AdjointRole r);

/// Solution of B(phi, z) = J'(u_h; phi) in some space.
struct AdjointSolution {
  CoeffVec z;
  AdjointRole role = AdjointRole::Enriched;
  std::optional<SolveReport> report;  // empty for the analytic witness
};

/// Solves the adjoint problem on `target`. J must be bound to target.space
/// and u_h given in that space (prolongate first). B is symmetric, so the
/// primal matrix is reused.
AdjointSolution solve_adjoint(const Functional& J, const CoeffVec& u_h, const Discretization& target,
                              AdjointRole role, const SolverOptions& opts = {});

/// The coarse representer C u_h of J'(u_h; .) as an exact adjoint, when the
/// functional's form matches the primal form and a witness exists.
std::optional<AdjointSolution> witness_adjoint(const Functional& J, const CoeffVec& u_h, const FormDef& primal_form);

/// L(z) - B(u_h, z) evaluated with the operators of d (z and u_h in d.space).
double adjoint_weighted_residual(const Discretization& d, const CoeffVec& u_h, const CoeffVec& z);

/// eta_2 = L(z) - B(u_h, z) with an exact-adjoint surrogate (reference
/// solve or analytic witness).
double eta2(const Discretization& d, const CoeffVec& u_h, const AdjointSolution& z);

/// eta_3 = L(z_h+) - B(u_h, z_h+) with the enriched adjoint.
double eta3(const Discretization& plus, const CoeffVec& u_h, const AdjointSolution& z_plus);

struct Eta1Result {
  double eta1 = 0.0;
  double eta3 = 0.0;
  double remainder = 0.0;
};

/// eta_1 = eta_3 + int_0^1 J''(u_h + s e; e, e)(1 - s) ds, e = u+ - u_h,
/// all fields in the enriched space.
Eta1Result eta1(const Functional& J_plus, const Discretization& plus, const CoeffVec& u_h, const CoeffVec& u_plus,
                const AdjointSolution& z_plus, const QuadRule& s_rule);

/// ||z - P_h z||_B / ||z||_B with P_h the B-orthogonal projection onto the
/// prolongated coarse space; 0 when ||z||_B = 0.
double z_distance_to_coarse(const AdjointSolution& z, const Discretization& fine, const Prolongation& prolong,
                            const Discretization& coarse, const SolverOptions& opts = {});

/// max_i |B(u+ - u_h, P phi_i)| over unconstrained coarse basis functions,
/// divided by ||A+||_inf ||u+ - u_h||_2 (0 when u+ = u_h).
double galerkin_orthogonality_defect(const Discretization& plus, const Prolongation& prolong, const CoeffVec& u_h,
                                     const CoeffVec& u_plus);

/// Everything estimated for one scenario at one refinement level.
struct EstimateReport {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double remainder_enriched = 0.0;
  std::optional<double> remainder_reference;
  std::optional<double> true_error;
  std::optional<double> effectivity_eta1;
  std::optional<double> effectivity_eta2;
  std::optional<double> effectivity_eta3;
  double z_distance_to_Vh = 0.0;
  std::optional<double> b_h_measured;
  AdjointRole eta2_source = AdjointRole::AnalyticWitness;

  bool operator==(const EstimateReport&) const = default;
};

}  // namespace goest
