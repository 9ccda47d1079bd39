#include "goest/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace goest {

namespace {

void require_space(const CoeffVec& c, const SpacePtr& s, const char* what) {
  if (c.space != s) throw std::invalid_argument(std::string(what) + ": field is not in the expected space");
}

double inf_norm(const SparseMatrix& A) {
  double m = 0.0;
  for (int r = 0; r < A.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) row += std::abs(it.value());
    m = std::max(m, row);
  }
  return m;
}

}  // namespace

std::string to_string(AdjointRole r) {
  switch (r) {
    case AdjointRole::Coarse: return "coarse";
    case AdjointRole::Enriched: return "enriched";
    case AdjointRole::Reference: return "reference";
    case AdjointRole::AnalyticWitness: return "analytic_witness";
  }
  return "unknown";
}

Discretization discretize(SpacePtr space, const FormDef& form, const LoadDef& load) {
  Discretization d{space, form, assemble_form(*space, form), assemble_load(*space, load), {}};
  d.system = apply_dirichlet(*space, d.matrix, d.load);
  return d;
}

PrimalSolution solve_primal(const Discretization& d, const SolverOptions& opts) {
  auto res = solve_spd(d.system, opts);
  CoeffVec u{d.space, std::move(res.x)};
  d.space->mask_dirichlet(u.values);
  return {std::move(u), res.report};
}

AdjointSolution solve_adjoint(const Functional& J, const CoeffVec& u_h, const Discretization& target,
                              AdjointRole role, const SolverOptions& opts) {
  if (J.space() != target.space) throw std::invalid_argument("solve_adjoint: functional bound to another space");
  require_space(u_h, target.space, "solve_adjoint");
  SystemPair sys{target.system.matrix, J.gradient(u_h)};
  target.space->mask_dirichlet(sys.rhs);
  auto res = solve_spd(sys, opts);
  CoeffVec z{target.space, std::move(res.x)};
  target.space->mask_dirichlet(z.values);
  return {std::move(z), role, res.report};
}

std::optional<AdjointSolution> witness_adjoint(const Functional& J, const CoeffVec& u_h, const FormDef& primal_form) {
  if (!(J.def().form == primal_form)) return std::nullopt;
  auto psi = J.coarse_adjoint_witness(u_h);
  if (!psi) return std::nullopt;
  return AdjointSolution{std::move(*psi), AdjointRole::AnalyticWitness, std::nullopt};
}

double adjoint_weighted_residual(const Discretization& d, const CoeffVec& u_h, const CoeffVec& z) {
  require_space(u_h, d.space, "adjoint_weighted_residual");
  require_space(z, d.space, "adjoint_weighted_residual");
  return d.load.dot(z.values) - bilinear(d.matrix, u_h.values, z.values);
}

double eta2(const Discretization& d, const CoeffVec& u_h, const AdjointSolution& z) {
  if (z.role != AdjointRole::Reference && z.role != AdjointRole::AnalyticWitness)
    throw std::invalid_argument("eta2 needs a reference or analytic-witness adjoint");
  return adjoint_weighted_residual(d, u_h, z.z);
}

double eta3(const Discretization& plus, const CoeffVec& u_h, const AdjointSolution& z_plus) {
  if (z_plus.role != AdjointRole::Enriched) throw std::invalid_argument("eta3 needs the enriched adjoint");
  return adjoint_weighted_residual(plus, u_h, z_plus.z);
}

Eta1Result eta1(const Functional& J_plus, const Discretization& plus, const CoeffVec& u_h, const CoeffVec& u_plus,
                const AdjointSolution& z_plus, const QuadRule& s_rule) {
  require_space(u_plus, plus.space, "eta1");
  Eta1Result r;
  r.eta3 = eta3(plus, u_h, z_plus);
  const CoeffVec e{plus.space, u_plus.values - u_h.values};
  r.remainder = J_plus.remainder(u_h, e, s_rule);
  r.eta1 = r.eta3 + r.remainder;
  return r;
}

double z_distance_to_coarse(const AdjointSolution& z, const Discretization& fine, const Prolongation& prolong,
                            const Discretization& coarse, const SolverOptions& opts) {
  require_space(z.z, fine.space, "z_distance_to_coarse");
  if (prolong.from != coarse.space || prolong.to != fine.space)
    throw std::invalid_argument("z_distance_to_coarse: prolongation does not connect the two spaces");
  const Vector Az = fine.matrix * z.z.values;
  const double z_energy = z.z.values.dot(Az);
  if (z_energy <= 0.0) return 0.0;

  Vector rhs = prolong.matrix.transpose() * Az;
  const SystemPair sys = apply_dirichlet(*coarse.space, coarse.matrix, rhs);
  const Vector c = solve_spd(sys, opts).x;
  const Vector d = z.z.values - prolong.matrix * c;
  return std::sqrt(std::max(0.0, bilinear(fine.matrix, d, d)) / z_energy);
}

double galerkin_orthogonality_defect(const Discretization& plus, const Prolongation& prolong, const CoeffVec& u_h,
                                     const CoeffVec& u_plus) {
  require_space(u_h, plus.space, "galerkin_orthogonality_defect");
  require_space(u_plus, plus.space, "galerkin_orthogonality_defect");
  const Vector e = u_plus.values - u_h.values;
  const double e_norm = e.norm();
  if (e_norm == 0.0) return 0.0;
  Vector g = prolong.matrix.transpose() * (plus.matrix * e);
  prolong.from->mask_dirichlet(g);
  return g.cwiseAbs().maxCoeff() / (inf_norm(plus.matrix) * e_norm);
}

}  // namespace goest
