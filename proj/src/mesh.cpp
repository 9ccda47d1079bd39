#include "goest/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace goest {

namespace {

constexpr double kBoundaryTol = 1e-14;

void classify_boundary(Mesh& m) {
  m.on_boundary.assign(m.vertices.size(), false);
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    m.on_boundary[v] = on_unit_boundary(m.vertices[v], m.dim);
}

Point midpoint(const Point& a, const Point& b) {
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
}

}  // namespace

bool on_unit_boundary(const Point& p, int dim) {
  for (int k = 0; k < dim; ++k)
    if (p[k] <= kBoundaryTol || p[k] >= 1.0 - kBoundaryTol) return true;
  return false;
}

double Mesh::cell_measure(int c) const {
  const auto& cell = cells[c];
  if (dim == 1) return vertices[cell[1]][0] - vertices[cell[0]][0];
  const Point& a = vertices[cell[0]];
  const Point& b = vertices[cell[1]];
  const Point& d = vertices[cell[2]];
  return 0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]));
}

Point Mesh::centroid(int c) const {
  Point x{0.0, 0.0};
  for (int v : cell_vertices(c)) {
    x[0] += vertices[v][0];
    x[1] += vertices[v][1];
  }
  const double inv = 1.0 / (dim + 1);
  return {x[0] * inv, x[1] * inv};
}

std::vector<int> Mesh::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < n_vertices(); ++v)
    if (on_boundary[v]) out.push_back(v);
  return out;
}

int Mesh::ancestor(int c, int target_level) const {
  if (target_level > level || target_level < 0)
    throw std::invalid_argument("ancestor: target level " + std::to_string(target_level) +
                                " outside [0, " + std::to_string(level) + "]");
  for (int k = level - 1; k >= target_level; --k) c = parents[k][c];
  return c;
}

Mesh build_unit_interval(int n_cells) {
  if (n_cells < 1) throw std::invalid_argument("build_unit_interval: n_cells must be >= 1");
  Mesh m;
  m.dim = 1;
  m.vertices.reserve(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i)
    m.vertices.push_back({static_cast<double>(i) / n_cells, 0.0});
  for (int i = 0; i < n_cells; ++i) m.cells.push_back({i, i + 1, -1});
  m.cell_subdomain.assign(n_cells, 0);
  classify_boundary(m);
  return m;
}

Mesh build_unit_square_tri(int n_per_side) {
  if (n_per_side < 1) throw std::invalid_argument("build_unit_square_tri: n_per_side must be >= 1");
  const int n = n_per_side;
  const int np = n + 1;
  Mesh m;
  m.dim = 2;
  m.vertices.reserve(np * np);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i)
      m.vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  auto vid = [np](int i, int j) { return j * np + i; };
  m.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      m.cells.push_back({v00, v10, v11});
      m.cells.push_back({v00, v11, v01});
    }
  }
  m.cell_subdomain.assign(m.cells.size(), 0);
  classify_boundary(m);
  return m;
}

std::vector<Edge> sorted_edges(const Mesh& m) {
  std::vector<Edge> edges;
  const int nv = m.vertices_per_cell();
  edges.reserve(m.cells.size() * (m.dim == 1 ? 1 : 3));
  for (const auto& cell : m.cells) {
    for (int a = 0; a < nv; ++a) {
      for (int b = a + 1; b < nv; ++b) {
        edges.push_back({std::min(cell[a], cell[b]), std::max(cell[a], cell[b])});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

int find_edge(std::span<const Edge> edges, int a, int b) {
  const Edge key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key)
    throw std::out_of_range("find_edge: no edge (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  return static_cast<int>(it - edges.begin());
}

Mesh refine_uniform(const Mesh& m) {
  Mesh r;
  r.dim = m.dim;
  r.level = m.level + 1;
  r.parents = m.parents;
  r.vertices = m.vertices;

  const auto edges = sorted_edges(m);
  const int first_mid = m.n_vertices();
  for (const auto& e : edges) r.vertices.push_back(midpoint(m.vertices[e[0]], m.vertices[e[1]]));

  std::vector<int> parent;
  if (m.dim == 1) {
    r.cells.reserve(2 * m.cells.size());
    for (int c = 0; c < m.n_cells(); ++c) {
      const auto& cell = m.cells[c];
      const int mid = first_mid + find_edge(edges, cell[0], cell[1]);
      r.cells.push_back({cell[0], mid, -1});
      r.cells.push_back({mid, cell[1], -1});
      parent.insert(parent.end(), 2, c);
    }
  } else {
    r.cells.reserve(4 * m.cells.size());
    for (int c = 0; c < m.n_cells(); ++c) {
      const auto& t = m.cells[c];
      const int m01 = first_mid + find_edge(edges, t[0], t[1]);
      const int m12 = first_mid + find_edge(edges, t[1], t[2]);
      const int m20 = first_mid + find_edge(edges, t[2], t[0]);
      r.cells.push_back({t[0], m01, m20});
      r.cells.push_back({m01, t[1], m12});
      r.cells.push_back({m20, m12, t[2]});
      r.cells.push_back({m01, m12, m20});
      parent.insert(parent.end(), 4, c);
    }
  }
  r.cell_subdomain.reserve(parent.size());
  for (int p : parent) r.cell_subdomain.push_back(m.cell_subdomain[p]);
  r.parents.push_back(std::move(parent));
  classify_boundary(r);
  return r;
}

Mesh tag_subdomain(const Mesh& m, const Box& region) {
  for (int k = 0; k < m.dim; ++k) {
    if (!(region.hi[k] > region.lo[k]))
      throw std::invalid_argument("tag_subdomain: degenerate box");
    if (region.lo[k] < 0.0 || region.hi[k] > 1.0)
      throw std::invalid_argument("tag_subdomain: box exceeds the unit domain");
  }
  Mesh out = m;
  for (int c = 0; c < m.n_cells(); ++c) {
    const Point x = m.centroid(c);
    bool inside = true;
    for (int k = 0; k < m.dim; ++k)
      inside = inside && x[k] >= region.lo[k] && x[k] <= region.hi[k];
    if (inside) out.cell_subdomain[c] = 1;
  }
  return out;
}

void check_mesh(const Mesh& m) {
  auto fail = [](const std::string& what) { throw std::runtime_error("invalid mesh: " + what); };
  if (m.dim != 1 && m.dim != 2) fail("dimension must be 1 or 2");
  if (m.cell_subdomain.size() != m.cells.size()) fail("one subdomain tag per cell required");
  if (m.on_boundary.size() != m.vertices.size()) fail("boundary flags do not match vertex count");
  if (static_cast<int>(m.parents.size()) != m.level) fail("refinement history does not match level");

  double total = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int v : m.cell_vertices(c))
      if (v < 0 || v >= m.n_vertices()) fail("cell " + std::to_string(c) + " references a missing vertex");
    const double mu = m.cell_measure(c);
    if (!(mu > 0.0)) fail("cell " + std::to_string(c) + " has non-positive measure");
    total += mu;
  }
  if (std::abs(total - 1.0) > 1e-12) fail("cell measures do not sum to 1");

  for (int v = 0; v < m.n_vertices(); ++v)
    if (m.on_boundary[v] != on_unit_boundary(m.vertices[v], m.dim))
      fail("boundary classification wrong at vertex " + std::to_string(v));
}

void write_vtk(const Mesh& m, std::ostream& out) {
  out << "# vtk DataFile Version 3.0\n"
      << "goest mesh level " << m.level << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << m.n_vertices() << " double\n";
  out.precision(17);
  for (const auto& p : m.vertices) out << p[0] << ' ' << p[1] << " 0\n";

  const int nv = m.vertices_per_cell();
  out << "CELLS " << m.n_cells() << ' ' << m.n_cells() * (nv + 1) << '\n';
  for (int c = 0; c < m.n_cells(); ++c) {
    out << nv;
    for (int v : m.cell_vertices(c)) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << m.n_cells() << '\n';
  const int vtk_type = m.dim == 1 ? 3 : 5;  // VTK_LINE, VTK_TRIANGLE
  for (int c = 0; c < m.n_cells(); ++c) out << vtk_type << '\n';
  out << "CELL_DATA " << m.n_cells() << "\nSCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (int tag : m.cell_subdomain) out << tag << '\n';
}

}  // namespace goest
