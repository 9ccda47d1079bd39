#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "goest/types.hpp"

namespace goest {

/// Vertex indices of a cell. Segments use the first two entries, triangles
/// all three (counter-clockwise).
using Cell = std::array<int, 3>;

/// Axis-aligned box; only the first `dim` coordinates are read.
struct Box {
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
};

/// Simplicial mesh of the unit interval or unit square.
///
/// Meshes produced by refine_uniform keep every parent vertex at its old
/// index and record, per generation, the parent of each child cell. That
/// history is what lets nested spaces build exact prolongations.
struct Mesh {
  int dim = 1;
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  std::vector<bool> on_boundary;
  std::vector<int> cell_subdomain;
  int level = 0;
  /// parents[k][c] is the level-k parent of cell c of the level-(k+1) mesh.
  std::vector<std::vector<int>> parents;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int vertices_per_cell() const { return dim + 1; }
  std::span<const int> cell_vertices(int c) const {
    return {cells[c].data(), static_cast<std::size_t>(dim + 1)};
  }

  double cell_measure(int c) const;
  Point centroid(int c) const;
  std::vector<int> boundary_vertices() const;

  /// Index of the level-`target_level` cell containing cell `c`.
  int ancestor(int c, int target_level) const;
};

Mesh build_unit_interval(int n_cells);
Mesh build_unit_square_tri(int n_per_side);
Mesh refine_uniform(const Mesh& m);

/// Cells whose centroid lies in `region` (closed) get tag 1; other tags are
/// left unchanged.
Mesh tag_subdomain(const Mesh& m, const Box& region);

/// Throws std::runtime_error naming the first violated mesh invariant.
void check_mesh(const Mesh& m);

/// Legacy VTK ASCII unstructured grid with the subdomain tags as cell data.
void write_vtk(const Mesh& m, std::ostream& out);

using Edge = std::array<int, 2>;

/// All cell edges as (lo, hi) vertex pairs, sorted lexicographically. In 1D
/// every cell is its own edge.
std::vector<Edge> sorted_edges(const Mesh& m);

/// Position of the edge {a, b} in a list produced by sorted_edges.
int find_edge(std::span<const Edge> edges, int a, int b);

/// True when the point lies on the boundary of (0,1)^dim.
bool on_unit_boundary(const Point& p, int dim);

}  // namespace goest
