#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "goest/space.hpp"

using namespace goest;

namespace {

std::shared_ptr<const Mesh> interval(int n) { return std::make_shared<const Mesh>(build_unit_interval(n)); }
std::shared_ptr<const Mesh> square(int n) { return std::make_shared<const Mesh>(build_unit_square_tri(n)); }

std::vector<Point> random_points(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < count) {
    Point p{u(rng), dim == 2 ? u(rng) : 0.0};
    pts.push_back(p);
  }
  return pts;
}

CoeffVec random_coeffs(const SpacePtr& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoeffVec c = CoeffVec::zero(s);
  for (int i = 0; i < s->n_dofs(); ++i) c.values[i] = u(rng);
  return c;
}

}  // namespace

TEST_CASE("dof counts and Dirichlet dofs") {
  const SpacePtr p1 = build_space(interval(4), 1, 1);
  CHECK(p1->n_dofs() == 5);
  CHECK(p1->dirichlet_dofs() == std::vector<int>{0, 4});

  CHECK(build_space(interval(4), 2, 1)->n_dofs() == 9);
  CHECK(build_space(square(2), 1, 2)->n_dofs() == 18);

  const auto m = square(3);
  const SpacePtr v2 = build_space(m, 2, 2);
  CHECK(v2->n_dofs() == 2 * (m->n_vertices() + static_cast<int>(sorted_edges(*m).size())));
  for (int d = 0; d < v2->n_dofs(); ++d) CHECK(v2->is_dirichlet(d) == on_unit_boundary(v2->dof_coord(d), 2));

  CHECK_THROWS_AS(build_space(interval(4), 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_space(interval(4), 0, 1), std::invalid_argument);
}

TEST_CASE("nodal basis property") {
  for (const auto& s : {build_space(interval(3), 2, 1), build_space(square(2), 2, 1), build_space(square(2), 1, 1)}) {
    const auto& nodes = s->node_coords();
    for (int i = 0; i < s->n_dofs(); ++i) {
      CoeffVec c = CoeffVec::zero(s);
      c.values[i] = 1.0;
      const auto vals = evaluate(c, nodes);
      for (int j = 0; j < s->n_dofs(); ++j) CHECK(std::abs(vals[j].value[0] - (i == j ? 1.0 : 0.0)) <= 1e-14);
    }
  }
}

TEST_CASE("shape functions form a partition of unity with zero-sum gradients") {
  const Mesh m = build_unit_square_tri(1);
  const CellGeometry g(m, 0);
  for (int deg : {1, 2}) {
    const int n = local_node_count(2, deg);
    std::vector<double> N(n);
    std::vector<Point> dN(n);
    const std::array<double, 3> lambda{0.2, 0.3, 0.5};
    shape_values(2, deg, lambda, N);
    shape_gradients(2, deg, lambda, g.grad_lambda, dN);
    double sum = 0.0, gx = 0.0, gy = 0.0;
    for (int i = 0; i < n; ++i) sum += N[i], gx += dN[i][0], gy += dN[i][1];
    CHECK(std::abs(sum - 1.0) <= 1e-15);
    CHECK(std::abs(gx) <= 1e-14);
    CHECK(std::abs(gy) <= 1e-14);
  }
}

TEST_CASE("h-enrichment reproduces the coarse field") {
  const SpacePtr s = build_space(interval(4), 1, 1);
  const auto [fine, P] = enrich(s, Enrichment::HRefine);
  CHECK(fine->mesh().n_cells() == 8);
  CHECK(fine->degree() == 1);
  const CoeffVec c = random_coeffs(s, 7);
  const CoeffVec f = P.apply(c);
  const auto pts = random_points(1, 100, 11);
  const auto a = evaluate(c, pts), b = evaluate(f, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK(std::abs(a[k].value[0] - b[k].value[0]) <= 1e-14);
}

TEST_CASE("p-enrichment reproduces the coarse field") {
  const SpacePtr s = build_space(interval(4), 1, 1);
  const auto [fine, P] = enrich(s, Enrichment::PIncrease);
  CHECK(fine->degree() == 2);
  CHECK(&fine->mesh() == &s->mesh());
  const CoeffVec c = random_coeffs(s, 3);
  const auto pts = random_points(1, 100, 5);
  const auto a = evaluate(c, pts), b = evaluate(P.apply(c), pts);
  for (std::size_t k = 0; k < pts.size(); ++k) CHECK(std::abs(a[k].value[0] - b[k].value[0]) <= 1e-12);

  CHECK_THROWS_AS(enrich(fine, Enrichment::PIncrease), std::invalid_argument);
}

TEST_CASE("enrichment in 2D, vector valued, both modes") {
  const SpacePtr s = build_space(square(2), 1, 2);
  for (auto mode : {Enrichment::HRefine, Enrichment::PIncrease}) {
    const auto [fine, P] = enrich(s, mode);
    const CoeffVec c = random_coeffs(s, 19);
    const auto pts = random_points(2, 100, 23);
    const auto a = evaluate(c, pts), b = evaluate(P.apply(c), pts);
    for (std::size_t k = 0; k < pts.size(); ++k)
      for (int comp = 0; comp < 2; ++comp) {
        CHECK(std::abs(a[k].value[comp] - b[k].value[comp]) <= 1e-13);
        CHECK(std::abs(a[k].grad[comp][0] - b[k].grad[comp][0]) <= 1e-12);
      }
  }
}

TEST_CASE("midpoint rows of the 2D h-prolongation") {
  const SpacePtr s = build_space(square(2), 1, 1);
  const auto [fine, P] = enrich(s, Enrichment::HRefine);
  const int n_coarse = s->mesh().n_vertices();
  for (int r = 0; r < fine->n_dofs(); ++r) {
    std::vector<double> entries;
    for (SparseMatrix::InnerIterator it(P.matrix, r); it; ++it) entries.push_back(it.value());
    if (r < n_coarse) {
      CHECK(entries == std::vector<double>{1.0});
    } else {
      REQUIRE(entries.size() == 2);
      CHECK(entries[0] == 0.5);
      CHECK(entries[1] == 0.5);
    }
  }
}

TEST_CASE("two-level prolongation agrees with the composition") {
  const SpacePtr s = build_space(square(2), 1, 1);
  const auto [mid, P1] = enrich(s, Enrichment::PIncrease);
  const auto [fine, P2] = enrich(mid, Enrichment::HRefine);
  const Prolongation direct = interpolation_operator(s, fine);
  const SparseMatrix composed = P2.matrix * P1.matrix;
  CHECK((SparseMatrix(direct.matrix - composed)).norm() <= 1e-14);
}

TEST_CASE("prolongation rejects unrelated spaces") {
  const SpacePtr a = build_space(square(2), 1, 1);
  const SpacePtr b = build_space(square(3), 1, 1);
  CHECK_THROWS_AS(interpolation_operator(a, b), std::invalid_argument);
  CHECK_THROWS_AS(interpolation_operator(a, build_space(square(2), 1, 2)), std::invalid_argument);
}

TEST_CASE("point evaluation") {
  const SpacePtr s = build_space(interval(4), 1, 1);
  const std::vector<Point> pts{{0.0, 0.0}, {0.3, 0.0}, {1.0, 0.0}};
  for (const auto& v : evaluate(CoeffVec::zero(s), pts)) CHECK(v.value[0] == 0.0);

  CoeffVec hat = CoeffVec::zero(s);
  hat.values[2] = 1.0;
  const std::vector<Point> half{{0.5, 0.0}};
  CHECK(evaluate(hat, half)[0].value[0] == 1.0);

  const CoeffVec u = interpolate(s, [](const Point& x) { return std::array<double, 2>{0.5 * x[0] * (1.0 - x[0]), 0.0}; });
  const std::vector<Point> quarter{{0.25, 0.0}};
  CHECK(std::abs(evaluate(u, quarter)[0].value[0] - 0.09375) <= 1e-15);

  const std::vector<Point> outside{{1.5, 0.0}};
  CHECK_THROWS_AS(evaluate(u, outside), std::out_of_range);
}

TEST_CASE("P2 interpolation reproduces quadratics") {
  const SpacePtr s = build_space(square(2), 2, 1);
  auto q = [](const Point& x) { return std::array<double, 2>{x[0] * x[0] - 2.0 * x[0] * x[1] + 0.5 * x[1], 0.0}; };
  const CoeffVec c = interpolate(s, q);
  const auto pts = random_points(2, 50, 31);
  const auto v = evaluate(c, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(std::abs(v[k].value[0] - q(pts[k])[0]) <= 1e-14);
    CHECK(std::abs(v[k].grad[0][0] - (2.0 * pts[k][0] - 2.0 * pts[k][1])) <= 1e-13);
  }
}
