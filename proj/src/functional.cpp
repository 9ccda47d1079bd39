#include "goest/functional.hpp"

#include <cmath>

namespace goest {

namespace {

constexpr double kSqrtDomainGuard = 1e-14;

CoeffVec axpy(const CoeffVec& u, double s, const CoeffVec& v) { return {u.space, u.values + s * v.values}; }

bool uses_g(FunctionalKind k) { return k == FunctionalKind::GEnergy || k == FunctionalKind::SqrtEnergy; }

}  // namespace

void GFunction::check_domain(double t) const {
  switch (kind) {
    case GKind::Sqrt:
      if (!(t > kSqrtDomainGuard))
        throw DomainError("square-root energy undefined at B(u,u) = " + std::to_string(t));
      break;
    case GKind::Power:
      if (exponent != std::floor(exponent) && !(t > 0.0))
        throw DomainError("non-integer power undefined at t = " + std::to_string(t));
      break;
    case GKind::Identity:
      break;
  }
}

double GFunction::value(double t) const {
  check_domain(t);
  switch (kind) {
    case GKind::Sqrt: return std::sqrt(t);
    case GKind::Power: return std::pow(t, exponent);
    case GKind::Identity: return t;
  }
  return 0.0;
}

double GFunction::d1(double t) const {
  check_domain(t);
  switch (kind) {
    case GKind::Sqrt: return 0.5 / std::sqrt(t);
    case GKind::Power: return exponent * std::pow(t, exponent - 1.0);
    case GKind::Identity: return 1.0;
  }
  return 0.0;
}

double GFunction::d2(double t) const {
  check_domain(t);
  switch (kind) {
    case GKind::Sqrt: return -0.25 / (t * std::sqrt(t));
    case GKind::Power: return exponent * (exponent - 1.0) * std::pow(t, exponent - 2.0);
    case GKind::Identity: return 0.0;
  }
  return 0.0;
}

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::LinearQoi: return "linear_qoi";
    case FunctionalKind::Energy: return "energy";
    case FunctionalKind::GEnergy: return "g_energy";
    case FunctionalKind::SqrtEnergy: return "sqrt_energy";
    case FunctionalKind::LocalEnergy: return "local_energy";
  }
  return "unknown";
}

FunctionalKind functional_kind_from_string(const std::string& s) {
  for (auto k : {FunctionalKind::LinearQoi, FunctionalKind::Energy, FunctionalKind::GEnergy,
                 FunctionalKind::SqrtEnergy, FunctionalKind::LocalEnergy})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown functional kind '" + s + "'");
}

Functional::Functional(FunctionalDef def, SpacePtr space) : def_(std::move(def)), space_(std::move(space)) {
  switch (def_.kind) {
    case FunctionalKind::LinearQoi:
      if (!def_.weight) throw std::invalid_argument("linear QoI requires a weight");
      weight_ = assemble_load(*space_, *def_.weight);
      break;
    case FunctionalKind::LocalEnergy:
      matrix_ = assemble_form(*space_, def_.form, def_.subdomain_tag);
      break;
    case FunctionalKind::SqrtEnergy:
      def_.g = GFunction::sqrt();
      matrix_ = assemble_form(*space_, def_.form);
      break;
    case FunctionalKind::Energy:
    case FunctionalKind::GEnergy:
      matrix_ = assemble_form(*space_, def_.form);
      break;
  }
}

void Functional::check_space(const CoeffVec& c) const {
  if (c.space != space_) throw std::invalid_argument("functional evaluated on a field from a different space");
}

double Functional::value(const CoeffVec& u) const {
  check_space(u);
  if (def_.kind == FunctionalKind::LinearQoi) return weight_.dot(u.values);
  const double a = bilinear(matrix_, u.values, u.values);
  return uses_g(def_.kind) ? def_.g.value(a) : a;
}

Vector Functional::gradient(const CoeffVec& u) const {
  check_space(u);
  if (def_.kind == FunctionalKind::LinearQoi) return weight_;
  Vector Au = matrix_ * u.values;
  if (!uses_g(def_.kind)) return 2.0 * Au;
  return 2.0 * def_.g.d1(u.values.dot(Au)) * Au;
}

double Functional::d1(const CoeffVec& u, const CoeffVec& v) const {
  check_space(v);
  return gradient(u).dot(v.values);
}

double Functional::d2(const CoeffVec& u, const CoeffVec& v, const CoeffVec& w) const {
  check_space(u);
  check_space(v);
  check_space(w);
  if (def_.kind == FunctionalKind::LinearQoi) return 0.0;
  const double bvw = bilinear(matrix_, v.values, w.values);
  if (!uses_g(def_.kind)) return 2.0 * bvw;
  const Vector Au = matrix_ * u.values;
  const double a = u.values.dot(Au);
  return 4.0 * def_.g.d2(a) * Au.dot(v.values) * Au.dot(w.values) + 2.0 * def_.g.d1(a) * bvw;
}

double Functional::remainder(const CoeffVec& u_h, const CoeffVec& e, const QuadRule& rule) const {
  if (rule.dim != 1) throw std::invalid_argument("remainder: rule must live on [0,1]");
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q][0];
    sum += rule.weights[q] * d2(axpy(u_h, s, e), e, e) * (1.0 - s);
  }
  return sum;
}

std::optional<CoeffVec> Functional::coarse_adjoint_witness(const CoeffVec& u_h) const {
  check_space(u_h);
  double scale = 0.0;
  switch (def_.kind) {
    case FunctionalKind::Energy:
      scale = 2.0;
      break;
    case FunctionalKind::GEnergy:
    case FunctionalKind::SqrtEnergy:
      scale = 2.0 * def_.g.d1(bilinear(matrix_, u_h.values, u_h.values));
      break;
    case FunctionalKind::LinearQoi:
    case FunctionalKind::LocalEnergy:
      return std::nullopt;
  }
  return CoeffVec{u_h.space, scale * u_h.values};
}

double fd_oracle_d1(const Functional& J, const CoeffVec& u, const CoeffVec& v, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("fd_oracle_d1: epsilon must be positive");
  return (J.value(axpy(u, epsilon, v)) - J.value(axpy(u, -epsilon, v))) / (2.0 * epsilon);
}

double fd_oracle_d2(const Functional& J, const CoeffVec& u, const CoeffVec& v, const CoeffVec& w, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("fd_oracle_d2: epsilon must be positive");
  return (J.d1(axpy(u, epsilon, w), v) - J.d1(axpy(u, -epsilon, w), v)) / (2.0 * epsilon);
}

double default_fd_epsilon(const CoeffVec& u) {
  const double scale = u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
  return 1e-5 * std::max(1.0, scale);
}

}  // namespace goest
