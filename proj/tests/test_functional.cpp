#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "goest/functional.hpp"

using namespace goest;

namespace {

SpacePtr interval(int n, int degree) {
  return build_space(std::make_shared<const Mesh>(build_unit_interval(n)), degree, 1);
}

CoeffVec random_field(const SpacePtr& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoeffVec c = CoeffVec::zero(s);
  for (int i = 0; i < s->n_dofs(); ++i) c.values[i] = u(rng);
  s->mask_dirichlet(c.values);
  return c;
}

CoeffVec quadratic_interpolant(const SpacePtr& s) {
  return interpolate(s, [](const Point& x) { return std::array<double, 2>{0.5 * x[0] * (1.0 - x[0]), 0.0}; });
}

const LoadDef kSine{[](const Point& x) { return std::array<double, 2>{std::sin(std::numbers::pi * x[0]), 0.0}; }, -1,
                    "sin"};

std::vector<FunctionalDef> all_kinds() {
  const FormDef p = FormDef::poisson();
  return {FunctionalDef::linear_qoi(kSine), FunctionalDef::energy(p), FunctionalDef::g_energy(p, GFunction::power(2.0)),
          FunctionalDef::g_energy(p, GFunction::power(1.5)), FunctionalDef::sqrt_energy(p),
          FunctionalDef::local_energy(p)};
}

std::shared_ptr<const Mesh> tagged_interval() {
  return std::make_shared<const Mesh>(tag_subdomain(build_unit_interval(8), Box{{0.0, 0.0}, {0.5, 0.0}}));
}

}  // namespace

TEST_CASE("kind names round-trip") {
  for (auto k : {FunctionalKind::LinearQoi, FunctionalKind::Energy, FunctionalKind::GEnergy, FunctionalKind::SqrtEnergy,
                 FunctionalKind::LocalEnergy})
    CHECK(functional_kind_from_string(to_string(k)) == k);
  CHECK(to_string(FunctionalKind::GEnergy) == "g_energy");
  CHECK_THROWS_AS(functional_kind_from_string("strain"), std::invalid_argument);
}

TEST_CASE("energy values") {
  const SpacePtr s = interval(4, 1);
  const Functional E(FunctionalDef::energy(FormDef::poisson()), s);
  CHECK(E.value(CoeffVec::zero(s)) == 0.0);

  const CoeffVec u = quadratic_interpolant(s);
  const double oracle = form_by_quadrature(u, u, FormDef::poisson());
  CHECK(std::abs(E.value(u) - 0.078125) <= 1e-15);
  CHECK(std::abs(oracle - (1.0 / 12.0 - 1.0 / 192.0)) <= 1e-15);

  const Functional S(FunctionalDef::sqrt_energy(FormDef::poisson()), s);
  CHECK(std::abs(S.value(u) - std::sqrt(0.078125)) <= 1e-15);
  CHECK(S.value(u) == doctest::Approx(0.2795085).epsilon(1e-7));
}

TEST_CASE("first derivatives") {
  std::mt19937_64 rng(1);
  const SpacePtr s = interval(6, 2);
  const CoeffVec u = random_field(s, rng), v = random_field(s, rng);
  for (const auto& def : all_kinds()) {
    const SpacePtr sp = def.kind == FunctionalKind::LocalEnergy ? build_space(tagged_interval(), 1, 1) : s;
    const Functional J(def, sp);
    const CoeffVec uu = sp == s ? u : random_field(sp, rng);
    CHECK(J.d1(uu, CoeffVec::zero(sp)) == 0.0);
    // gradient vector against the directional derivative
    const CoeffVec vv = sp == s ? v : random_field(sp, rng);
    CHECK(std::abs(J.gradient(uu).dot(vv.values) - J.d1(uu, vv)) <= 1e-13 * std::max(1.0, std::abs(J.d1(uu, vv))));
  }

  const Functional E(FunctionalDef::energy(FormDef::poisson()), s);
  CHECK(std::abs(E.d1(u, v) - 2.0 * bilinear(E.form_matrix(), u.values, v.values)) <= 1e-13);

  const Functional S(FunctionalDef::sqrt_energy(FormDef::poisson()), s);
  CHECK(std::abs(S.d1(u, u) - S.value(u)) <= 1e-14 * S.value(u));
}

TEST_CASE("second derivatives") {
  std::mt19937_64 rng(2);
  const SpacePtr s = interval(6, 2);
  const CoeffVec u = random_field(s, rng), v = random_field(s, rng), w = random_field(s, rng);
  const CoeffVec u2 = random_field(s, rng);

  const Functional L(FunctionalDef::linear_qoi(kSine), s);
  CHECK(L.d2(u, v, w) == 0.0);

  const Functional E(FunctionalDef::energy(FormDef::poisson()), s);
  const double two_b = 2.0 * bilinear(E.form_matrix(), v.values, w.values);
  CHECK(std::abs(E.d2(u, v, w) - two_b) <= 1e-13 * std::abs(two_b));
  CHECK(E.d2(u, v, w) == E.d2(u2, v, w));

  for (const auto& def : all_kinds()) {
    if (def.kind == FunctionalKind::LocalEnergy) continue;
    const Functional J(def, s);
    const double a = J.d2(u, v, w), b = J.d2(u, w, v);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("finite-difference oracles") {
  std::mt19937_64 rng(3);
  const SpacePtr s = interval(8, 2);
  const FormDef p = FormDef::poisson();
  const Functional E(FunctionalDef::energy(p), s);
  const Functional S(FunctionalDef::sqrt_energy(p), s);
  const Functional G(FunctionalDef::g_energy(p, GFunction::power(2.0)), s);
  for (int k = 0; k < 20; ++k) {
    CoeffVec u = random_field(s, rng);
    const CoeffVec v = random_field(s, rng), w = random_field(s, rng);
    u.values /= std::sqrt(E.value(u));  // B(u,u) = 1
    const double eps = default_fd_epsilon(u);

    const double e1 = E.d1(u, v);
    CHECK(std::abs(e1 - fd_oracle_d1(E, u, v, eps)) <= 1e-7 * std::abs(e1));
    const double s1 = S.d1(u, v);
    CHECK(std::abs(s1 - fd_oracle_d1(S, u, v, eps)) <= 1e-6 * std::abs(s1));
    const double g2 = G.d2(u, v, w);
    CHECK(std::abs(g2 - fd_oracle_d2(G, u, v, w, eps)) <= 1e-5 * std::abs(g2));
  }
}

TEST_CASE("Taylor remainder") {
  std::mt19937_64 rng(4);
  const SpacePtr s = interval(8, 2);
  const QuadRule rule = gauss_segment(10);
  const Functional L(FunctionalDef::linear_qoi(kSine), s);
  const Functional E(FunctionalDef::energy(FormDef::poisson()), s);
  const Functional S(FunctionalDef::sqrt_energy(FormDef::poisson()), s);
  for (int k = 0; k < 20; ++k) {
    const CoeffVec u = random_field(s, rng);
    CoeffVec e = random_field(s, rng);
    e.values *= 0.1;
    CHECK(L.remainder(u, e, rule) == 0.0);
    const double bee = bilinear(E.form_matrix(), e.values, e.values);
    CHECK(std::abs(E.remainder(u, e, gauss_segment(1)) - bee) <= 1e-13 * bee);

    const CoeffVec ue{s, u.values + e.values};
    const double lhs = S.value(ue) - S.value(u);
    const double rhs = S.d1(u, e) + S.remainder(u, e, rule);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({1.0, S.value(u), S.value(ue)}));
  }
}

TEST_CASE("coarse adjoint witnesses") {
  const SpacePtr s = interval(4, 1);
  const CoeffVec u = quadratic_interpolant(s);

  const Functional E(FunctionalDef::energy(FormDef::poisson()), s);
  const auto we = E.coarse_adjoint_witness(u);
  REQUIRE(we);
  CHECK((we->values - 2.0 * u.values).cwiseAbs().maxCoeff() == 0.0);

  const Functional S(FunctionalDef::sqrt_energy(FormDef::poisson()), s);
  const auto ws = S.coarse_adjoint_witness(u);
  REQUIRE(ws);
  const double C = ws->values[2] / u.values[2];
  CHECK(std::abs(C - 1.0 / std::sqrt(0.078125)) <= 1e-13);
  CHECK(C == doctest::Approx(3.5777).epsilon(1e-4));

  // J'(u; v) = B(v, psi) for every basis vector
  for (int i = 0; i < s->n_dofs(); ++i) {
    CoeffVec v = CoeffVec::zero(s);
    v.values[i] = 1.0;
    CHECK(std::abs(S.d1(u, v) - bilinear(S.form_matrix(), v.values, ws->values)) <= 1e-14);
  }

  const SpacePtr tagged = build_space(tagged_interval(), 1, 1);
  const Functional local(FunctionalDef::local_energy(FormDef::poisson()), tagged);
  CHECK_FALSE(local.coarse_adjoint_witness(CoeffVec::zero(tagged)).has_value());
  CHECK_FALSE(Functional(FunctionalDef::linear_qoi(kSine), s).coarse_adjoint_witness(u).has_value());
}

TEST_CASE("domain errors") {
  const SpacePtr s = interval(4, 1);
  const Functional S(FunctionalDef::sqrt_energy(FormDef::poisson()), s);
  const CoeffVec zero = CoeffVec::zero(s);
  const CoeffVec u = quadratic_interpolant(s);
  CHECK_THROWS_AS(S.value(zero), DomainError);
  CHECK_THROWS_AS(S.d1(zero, u), DomainError);
  CHECK_THROWS_AS(S.coarse_adjoint_witness(zero), DomainError);
  CHECK_THROWS_AS(S.remainder(zero, zero, gauss_segment(3)), DomainError);

  const Functional E(FunctionalDef::energy(FormDef::poisson()), s);
  CHECK_THROWS_AS(E.value(CoeffVec::zero(interval(4, 1))), std::invalid_argument);
}

TEST_CASE("local energy restricts to tagged cells") {
  const SpacePtr s = build_space(tagged_interval(), 1, 1);
  const Functional J(FunctionalDef::local_energy(FormDef::poisson()), s);
  // u = x(1-x): int_0^{1/2} (1 - 2x)^2 = 1/6, and the P1 interpolant loses h^2/3 per unit length
  const CoeffVec u = interpolate(s, [](const Point& x) { return std::array<double, 2>{x[0] * (1.0 - x[0]), 0.0}; });
  const double h = 0.125;
  CHECK(std::abs(J.value(u) - (1.0 / 6.0 - 0.5 * h * h / 3.0)) <= 1e-14);
}
