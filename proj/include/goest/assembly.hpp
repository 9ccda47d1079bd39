#pragma once

#include <optional>
#include <string>

#include "goest/quad.hpp"
#include "goest/space.hpp"
#include "goest/types.hpp"

namespace goest {

enum class FormKind { Poisson, Elasticity };

/// Symmetric coercive bilinear form B(u, phi).
///   Poisson:    int grad u . grad phi
///   Elasticity: int sigma(u) : grad phi, sigma = lambda tr(eps) I + 2 mu eps (plane strain)
struct FormDef {
  FormKind kind = FormKind::Poisson;
  double lambda = 0.0;
  double mu = 0.0;

  static FormDef poisson() { return {}; }
  static FormDef elasticity(double lambda, double mu) { return {FormKind::Elasticity, lambda, mu}; }
  bool operator==(const FormDef&) const = default;
};

/// Throws std::invalid_argument when the form cannot act on the space.
void check_compatible(const FeSpace& space, const FormDef& form);

/// Load functional L(phi) = int f . phi with a closed-form source.
struct LoadDef {
  VectorField source;
  /// Polynomial degree of the source, or -1 for transcendental sources.
  int poly_degree = -1;
  std::string description;
};

/// Galerkin matrix of B on the nodal basis, without boundary conditions.
/// With `subdomain_tag`, only cells carrying that tag contribute (B_omega).
SparseMatrix assemble_form(const FeSpace& space, const FormDef& form,
                           std::optional<int> subdomain_tag = std::nullopt);

/// Vector of L(phi_i).
///
/// Polynomial sources use a rule exact for degree p + poly_degree. Smooth
/// transcendental sources use a high-order rule (degree 19 in 1D, 14 in 2D),
/// so that L is evaluated to roundoff on every mesh; nested spaces then see
/// the same functional and Galerkin identities hold at solver precision.
Vector assemble_load(const FeSpace& space, const LoadDef& load);

/// Matrix and right-hand side with homogeneous Dirichlet rows and columns
/// eliminated symmetrically (identity on constrained DOFs, zero rhs there).
struct SystemPair {
  SparseMatrix matrix;
  Vector rhs;
};

SystemPair apply_dirichlet(const FeSpace& space, const SparseMatrix& matrix, const Vector& rhs);

/// a^T M b.
double bilinear(const SparseMatrix& m, const Vector& a, const Vector& b);

/// Integrand used by form_by_quadrature for elasticity: sigma(u):grad(phi)
/// (the form as defined) or sigma(u):eps(phi) (its symmetric rewriting).
enum class ElasticIntegrand { StressGradient, StressStrain };

/// B(a, b) by direct quadrature of the integrand, independent of the
/// assembled matrix.
double form_by_quadrature(const CoeffVec& a, const CoeffVec& b, const FormDef& form,
                          ElasticIntegrand integrand = ElasticIntegrand::StressGradient,
                          std::optional<int> subdomain_tag = std::nullopt);

/// Rule used for stiffness terms on a space (exactness >= 2p).
QuadRule stiffness_rule(const FeSpace& space);

/// High-order rule used for transcendental integrands.
QuadRule high_order_rule(int dim);

}  // namespace goest
