#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "goest/assembly.hpp"
#include "goest/quad.hpp"
#include "goest/space.hpp"

namespace goest {

/// Raised when a functional is evaluated outside its domain of definition
/// (e.g. the square-root energy at zero energy).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class GKind { Sqrt, Power, Identity };

/// Outer function G in J(u) = G(B(u,u)).
struct GFunction {
  GKind kind = GKind::Identity;
  double exponent = 1.0;

  static GFunction sqrt() { return {GKind::Sqrt, 0.5}; }
  static GFunction power(double r) { return {GKind::Power, r}; }
  static GFunction identity() { return {GKind::Identity, 1.0}; }

  /// Throws DomainError when G is not twice differentiable at t.
  void check_domain(double t) const;
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

enum class FunctionalKind { LinearQoi, Energy, GEnergy, SqrtEnergy, LocalEnergy };

std::string to_string(FunctionalKind k);
FunctionalKind functional_kind_from_string(const std::string& s);

/// Description of a quantity of interest, independent of any space.
struct FunctionalDef {
  FunctionalKind kind = FunctionalKind::Energy;
  FormDef form;
  GFunction g;             // GEnergy only
  std::optional<LoadDef> weight;  // LinearQoi only: J(u) = int q . u
  int subdomain_tag = 1;   // LocalEnergy only

  static FunctionalDef linear_qoi(LoadDef q) { return {FunctionalKind::LinearQoi, {}, {}, std::move(q), 1}; }
  static FunctionalDef energy(FormDef f) { return {FunctionalKind::Energy, f, {}, {}, 1}; }
  static FunctionalDef g_energy(FormDef f, GFunction g) { return {FunctionalKind::GEnergy, f, g, {}, 1}; }
  static FunctionalDef sqrt_energy(FormDef f) {
    return {FunctionalKind::SqrtEnergy, f, GFunction::sqrt(), {}, 1};
  }
  static FunctionalDef local_energy(FormDef f, int tag = 1) { return {FunctionalKind::LocalEnergy, f, {}, {}, tag}; }
};

/// A functional bound to one space, with analytic value, first and second
/// directional derivatives.
///
///   Energy:      J = B(u,u),         J' = 2B(u,v),        J'' = 2B(v,w)
///   GEnergy:     J = G(a), a = B(u,u),
///                J' = 2G'(a)B(u,v),  J'' = 4G''(a)B(u,v)B(u,w) + 2G'(a)B(v,w)
///   SqrtEnergy:  GEnergy with G = sqrt
///   LocalEnergy: Energy with B restricted to the tagged cells
///   LinearQoi:   J = int q.u,        J' = J(v),           J'' = 0
class Functional {
 public:
  Functional(FunctionalDef def, SpacePtr space);

  const FunctionalDef& def() const { return def_; }
  FunctionalKind kind() const { return def_.kind; }
  const SpacePtr& space() const { return space_; }

  double value(const CoeffVec& u) const;
  double d1(const CoeffVec& u, const CoeffVec& v) const;
  double d2(const CoeffVec& u, const CoeffVec& v, const CoeffVec& w) const;

  /// The vector (J'(u; phi_i))_i over all basis functions.
  Vector gradient(const CoeffVec& u) const;

  /// int_0^1 J''(u_h + s e; e, e)(1 - s) ds with the given rule on [0,1].
  double remainder(const CoeffVec& u_h, const CoeffVec& e, const QuadRule& rule) const;

  /// psi_h = C u_h with J'(u_h; v) = B(v, psi_h) for every v, when such a
  /// coarse representer exists by construction (Energy, GEnergy, SqrtEnergy);
  /// nullopt otherwise.
  std::optional<CoeffVec> coarse_adjoint_witness(const CoeffVec& u_h) const;

  /// B of the functional's form (or B_omega for LocalEnergy) on this space.
  const SparseMatrix& form_matrix() const { return matrix_; }

 private:
  void check_space(const CoeffVec& c) const;

  FunctionalDef def_;
  SpacePtr space_;
  SparseMatrix matrix_;
  Vector weight_;
};

/// Central-difference oracles straight from the Gateaux definitions:
///   (J(u + eps v) - J(u - eps v)) / (2 eps)
///   (J'(u + eps w; v) - J'(u - eps w; v)) / (2 eps)
double fd_oracle_d1(const Functional& J, const CoeffVec& u, const CoeffVec& v, double epsilon);
double fd_oracle_d2(const Functional& J, const CoeffVec& u, const CoeffVec& v, const CoeffVec& w, double epsilon);

/// Default probe size 1e-5 * max(1, max |u|).
double default_fd_epsilon(const CoeffVec& u);

}  // namespace goest
