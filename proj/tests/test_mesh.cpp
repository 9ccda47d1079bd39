#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "goest/mesh.hpp"

using namespace goest;

namespace {

double total_measure(const Mesh& m) {
  double sum = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) sum += m.cell_measure(c);
  return sum;
}

int count_tagged(const Mesh& m) { return static_cast<int>(std::count(m.cell_subdomain.begin(), m.cell_subdomain.end(), 1)); }

}  // namespace

TEST_CASE("unit interval meshes") {
  const Mesh one = build_unit_interval(1);
  CHECK(one.n_vertices() == 2);
  CHECK(one.n_cells() == 1);
  CHECK(one.boundary_vertices() == std::vector<int>{0, 1});

  const Mesh four = build_unit_interval(4);
  REQUIRE(four.n_vertices() == 5);
  for (int v = 0; v < 5; ++v) CHECK(four.vertices[v][0] == doctest::Approx(0.25 * v).epsilon(1e-15));
  CHECK(total_measure(four) == doctest::Approx(1.0).epsilon(1e-14));

  const Mesh eight = build_unit_interval(8);
  CHECK(eight.vertices[3][0] == 0.375);
  CHECK_FALSE(eight.on_boundary[3]);

  CHECK_THROWS_AS(build_unit_interval(0), std::invalid_argument);
}

TEST_CASE("unit square meshes") {
  const Mesh one = build_unit_square_tri(1);
  CHECK(one.n_vertices() == 4);
  CHECK(one.n_cells() == 2);
  CHECK(one.boundary_vertices().size() == 4);

  const Mesh two = build_unit_square_tri(2);
  CHECK(two.n_vertices() == 9);
  CHECK(two.n_cells() == 8);
  CHECK(two.n_vertices() - static_cast<int>(two.boundary_vertices().size()) == 1);

  const Mesh four = build_unit_square_tri(4);
  CHECK(std::abs(total_measure(four) - 1.0) <= 1e-12);
  for (int c = 0; c < four.n_cells(); ++c) CHECK(four.cell_measure(c) > 0.0);
  CHECK_NOTHROW(check_mesh(four));

  CHECK_THROWS_AS(build_unit_square_tri(0), std::invalid_argument);
}

TEST_CASE("boundary flags follow coordinates") {
  const Mesh m = refine_uniform(build_unit_square_tri(3));
  for (int v = 0; v < m.n_vertices(); ++v) {
    const auto& p = m.vertices[v];
    const bool expect = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
    CHECK(m.on_boundary[v] == expect);
  }
}

TEST_CASE("uniform refinement") {
  const Mesh coarse = build_unit_interval(2);
  const Mesh fine = refine_uniform(coarse);
  REQUIRE(fine.n_cells() == 4);
  std::vector<double> xs;
  for (const auto& v : fine.vertices) xs.push_back(v[0]);
  std::sort(xs.begin(), xs.end());
  CHECK(xs == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(fine.level == 1);

  const Mesh sq = refine_uniform(build_unit_square_tri(2));
  CHECK(sq.n_cells() == 32);
  const Mesh twice = refine_uniform(refine_uniform(build_unit_square_tri(2)));
  CHECK(std::abs(total_measure(twice) - 1.0) <= 1e-12);
  CHECK_NOTHROW(check_mesh(twice));
}

TEST_CASE("refinement keeps parent vertices and records ancestry") {
  const Mesh coarse = build_unit_square_tri(2);
  const Mesh fine = refine_uniform(refine_uniform(coarse));
  for (int v = 0; v < coarse.n_vertices(); ++v) CHECK(fine.vertices[v] == coarse.vertices[v]);
  REQUIRE(fine.parents.size() == 2);
  for (int c = 0; c < fine.n_cells(); ++c) {
    const int a = fine.ancestor(c, 0);
    const auto x = fine.centroid(c);
    // the centroid of a child lies inside its ancestor
    const auto& t = coarse.cells[a];
    const auto& p0 = coarse.vertices[t[0]];
    const auto& p1 = coarse.vertices[t[1]];
    const auto& p2 = coarse.vertices[t[2]];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const double l1 = ((x[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (x[1] - p0[1])) / det;
    const double l2 = ((p1[0] - p0[0]) * (x[1] - p0[1]) - (x[0] - p0[0]) * (p1[1] - p0[1])) / det;
    CHECK(l1 > 0.0);
    CHECK(l2 > 0.0);
    CHECK(l1 + l2 < 1.0);
  }
}

TEST_CASE("subdomain tagging") {
  const Mesh all = tag_subdomain(build_unit_square_tri(2), Box{{0.0, 0.0}, {1.0, 1.0}});
  CHECK(count_tagged(all) == all.n_cells());

  const Mesh line = tag_subdomain(build_unit_interval(4), Box{{0.0, 0.0}, {0.5, 0.0}});
  CHECK(line.cell_subdomain == std::vector<int>{1, 1, 0, 0});

  const Mesh sq = tag_subdomain(build_unit_square_tri(4), Box{{0.0, 0.0}, {0.5, 0.5}});
  CHECK(count_tagged(sq) == 8);

  CHECK(refine_uniform(sq).cell_subdomain.size() == 128);
  CHECK(count_tagged(refine_uniform(sq)) == 32);

  CHECK_THROWS_AS(tag_subdomain(sq, Box{{0.2, 0.2}, {0.2, 0.8}}), std::invalid_argument);
}

TEST_CASE("sorted edges") {
  const Mesh m = build_unit_square_tri(2);
  const auto edges = sorted_edges(m);
  // V - E + F = 1 for a triangulated disc
  CHECK(m.n_vertices() - static_cast<int>(edges.size()) + m.n_cells() == 1);
  CHECK(std::is_sorted(edges.begin(), edges.end()));
  const auto& e = edges[5];
  CHECK(find_edge(edges, e[1], e[0]) == 5);
}

TEST_CASE("vtk output") {
  std::ostringstream out;
  write_vtk(build_unit_square_tri(1), out);
  const std::string s = out.str();
  CHECK(s.find("POINTS 4") != std::string::npos);
  CHECK(s.find("CELLS 2") != std::string::npos);
}
