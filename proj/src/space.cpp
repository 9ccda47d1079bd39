#include "goest/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace goest {

namespace {

constexpr std::array<std::array<int, 2>, 3> kEdgeVertices{{{0, 1}, {1, 2}, {2, 0}}};

std::array<double, 3> reference_to_barycentric(int dim, const Point& xi) {
  if (dim == 1) return {1.0 - xi[0], xi[0], 0.0};
  return {1.0 - xi[0] - xi[1], xi[0], xi[1]};
}

}  // namespace

CellGeometry::CellGeometry(const Mesh& m, int cell) : dim(m.dim) {
  const auto verts = m.cell_vertices(cell);
  for (int i = 0; i <= dim; ++i) vertex[i] = m.vertices[verts[i]];
  if (dim == 1) {
    measure = vertex[1][0] - vertex[0][0];
    grad_lambda[0] = {-1.0 / measure, 0.0};
    grad_lambda[1] = {1.0 / measure, 0.0};
    return;
  }
  const double x10 = vertex[1][0] - vertex[0][0], y10 = vertex[1][1] - vertex[0][1];
  const double x20 = vertex[2][0] - vertex[0][0], y20 = vertex[2][1] - vertex[0][1];
  const double det = x10 * y20 - x20 * y10;
  measure = 0.5 * det;
  grad_lambda[1] = {y20 / det, -x20 / det};
  grad_lambda[2] = {-y10 / det, x10 / det};
  grad_lambda[0] = {-grad_lambda[1][0] - grad_lambda[2][0], -grad_lambda[1][1] - grad_lambda[2][1]};
}

std::array<double, 3> CellGeometry::barycentric(const Point& x) const {
  if (dim == 1) {
    const double l1 = (x[0] - vertex[0][0]) / measure;
    return {(vertex[1][0] - x[0]) / measure, l1, 0.0};
  }
  const double dx = x[0] - vertex[0][0], dy = x[1] - vertex[0][1];
  const double l1 = grad_lambda[1][0] * dx + grad_lambda[1][1] * dy;
  const double l2 = grad_lambda[2][0] * dx + grad_lambda[2][1] * dy;
  return {1.0 - l1 - l2, l1, l2};
}

Point CellGeometry::map(const std::array<double, 3>& lambda) const {
  Point x{0.0, 0.0};
  for (int i = 0; i <= dim; ++i) {
    x[0] += lambda[i] * vertex[i][0];
    x[1] += lambda[i] * vertex[i][1];
  }
  return x;
}

int local_node_count(int dim, int degree) {
  if (degree == 1) return dim + 1;
  return dim == 1 ? 3 : 6;
}

void shape_values(int dim, int degree, const std::array<double, 3>& l, std::span<double> out) {
  const int nv = dim + 1;
  if (degree == 1) {
    for (int i = 0; i < nv; ++i) out[i] = l[i];
    return;
  }
  for (int i = 0; i < nv; ++i) out[i] = l[i] * (2.0 * l[i] - 1.0);
  const int ne = dim == 1 ? 1 : 3;
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = kEdgeVertices[e];
    out[nv + e] = 4.0 * l[a] * l[b];
  }
}

void shape_gradients(int dim, int degree, const std::array<double, 3>& l,
                     const std::array<Point, 3>& gl, std::span<Point> out) {
  const int nv = dim + 1;
  if (degree == 1) {
    for (int i = 0; i < nv; ++i) out[i] = gl[i];
    return;
  }
  for (int i = 0; i < nv; ++i) {
    const double s = 4.0 * l[i] - 1.0;
    out[i] = {s * gl[i][0], s * gl[i][1]};
  }
  const int ne = dim == 1 ? 1 : 3;
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = kEdgeVertices[e];
    out[nv + e] = {4.0 * (l[b] * gl[a][0] + l[a] * gl[b][0]), 4.0 * (l[b] * gl[a][1] + l[a] * gl[b][1])};
  }
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int components)
    : mesh_(std::move(mesh)), degree_(degree), components_(components) {
  if (degree_ != 1 && degree_ != 2)
    throw std::invalid_argument("FeSpace: degree must be 1 or 2, got " + std::to_string(degree_));
  if (components_ < 1 || components_ > 2)
    throw std::invalid_argument("FeSpace: components must be 1 or 2");

  const Mesh& m = *mesh_;
  nodes_per_cell_ = local_node_count(m.dim, degree_);
  node_coords_ = m.vertices;
  cell_nodes_.reserve(static_cast<std::size_t>(m.n_cells()) * nodes_per_cell_);

  if (degree_ == 1) {
    for (int c = 0; c < m.n_cells(); ++c)
      for (int v : m.cell_vertices(c)) cell_nodes_.push_back(v);
  } else {
    const auto edges = sorted_edges(m);
    for (const auto& e : edges) {
      const Point& a = m.vertices[e[0]];
      const Point& b = m.vertices[e[1]];
      node_coords_.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
    }
    const int ne = m.dim == 1 ? 1 : 3;
    for (int c = 0; c < m.n_cells(); ++c) {
      const auto& cell = m.cells[c];
      for (int v : m.cell_vertices(c)) cell_nodes_.push_back(v);
      for (int e = 0; e < ne; ++e) {
        const auto [a, b] = kEdgeVertices[e];
        cell_nodes_.push_back(m.n_vertices() + find_edge(edges, cell[a], cell[b]));
      }
    }
  }

  dirichlet_mask_.assign(n_dofs(), false);
  for (int n = 0; n < n_nodes(); ++n) {
    if (!on_unit_boundary(node_coords_[n], m.dim)) continue;
    for (int k = 0; k < components_; ++k) {
      dirichlet_mask_[dof(n, k)] = true;
      dirichlet_dofs_.push_back(dof(n, k));
    }
  }
}

void FeSpace::mask_dirichlet(Vector& v) const {
  for (int d : dirichlet_dofs_) v[d] = 0.0;
}

SpacePtr build_space(std::shared_ptr<const Mesh> mesh, int degree, int components) {
  return std::make_shared<const FeSpace>(std::move(mesh), degree, components);
}

CoeffVec interpolate(const SpacePtr& space, const VectorField& f) {
  CoeffVec out = CoeffVec::zero(space);
  for (int n = 0; n < space->n_nodes(); ++n) {
    const auto val = f(space->node_coords()[n]);
    for (int k = 0; k < space->components(); ++k) out.values[space->dof(n, k)] = val[k];
  }
  return out;
}

CellValues::CellValues(const FeSpace& space, int cell, const QuadRule& rule)
    : n_q(rule.size()), n_local(space.nodes_per_cell()) {
  const CellGeometry geo(space.mesh(), cell);
  const int dim = space.dim();
  const double scale = geo.measure / reference_measure(dim);
  x.resize(n_q);
  JxW.resize(n_q);
  N.resize(static_cast<std::size_t>(n_q) * n_local);
  grad_N.resize(static_cast<std::size_t>(n_q) * n_local);
  for (int q = 0; q < n_q; ++q) {
    const auto lambda = reference_to_barycentric(dim, rule.points[q]);
    x[q] = geo.map(lambda);
    JxW[q] = rule.weights[q] * scale;
    shape_values(dim, space.degree(), lambda, std::span<double>(N).subspan(q * n_local, n_local));
    shape_gradients(dim, space.degree(), lambda, geo.grad_lambda,
                    std::span<Point>(grad_N).subspan(q * n_local, n_local));
  }
}

CoeffVec Prolongation::apply(const CoeffVec& c) const {
  if (c.space != from) throw std::invalid_argument("Prolongation::apply: field is not in the source space");
  return {to, matrix * c.values};
}

Prolongation interpolation_operator(const SpacePtr& from, const SpacePtr& to) {
  const Mesh& coarse = from->mesh();
  const Mesh& fine = to->mesh();
  if (from->components() != to->components())
    throw std::invalid_argument("interpolation_operator: component counts differ");
  if (coarse.dim != fine.dim || fine.level < coarse.level)
    throw std::invalid_argument("interpolation_operator: target mesh is not a refinement of the source mesh");
  const int children = fine.dim == 1 ? 2 : 4;
  long expected = coarse.n_cells();
  for (int k = coarse.level; k < fine.level; ++k) expected *= children;
  if (expected != fine.n_cells() || fine.n_vertices() < coarse.n_vertices())
    throw std::invalid_argument("interpolation_operator: meshes are not nested");
  for (int v = 0; v < coarse.n_vertices(); ++v)
    if (coarse.vertices[v] != fine.vertices[v])
      throw std::invalid_argument("interpolation_operator: parent vertex " + std::to_string(v) + " moved");
  if (to->degree() < from->degree())
    throw std::invalid_argument("interpolation_operator: target degree is lower than source degree");

  const int comps = from->components();
  const int n_coarse_local = from->nodes_per_cell();
  std::vector<bool> done(to->n_nodes(), false);
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> N(n_coarse_local);

  for (int f = 0; f < fine.n_cells(); ++f) {
    const int c = fine.ancestor(f, coarse.level);
    const CellGeometry geo(coarse, c);
    const auto coarse_nodes = from->cell_nodes(c);
    for (int node : to->cell_nodes(f)) {
      if (done[node]) continue;
      done[node] = true;
      const auto lambda = geo.barycentric(to->node_coords()[node]);
      for (int i = 0; i <= coarse.dim; ++i)
        if (lambda[i] < -1e-10)
          throw std::logic_error("interpolation_operator: fine node outside its ancestor cell");
      shape_values(coarse.dim, from->degree(), lambda, N);
      for (int j = 0; j < n_coarse_local; ++j) {
        if (std::abs(N[j]) < 1e-14) continue;
        for (int k = 0; k < comps; ++k)
          triplets.emplace_back(to->dof(node, k), from->dof(coarse_nodes[j], k), N[j]);
      }
    }
  }
  Prolongation p{from, to, SparseMatrix(to->n_dofs(), from->n_dofs())};
  p.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return p;
}

std::pair<SpacePtr, Prolongation> enrich(const SpacePtr& space, Enrichment mode) {
  SpacePtr plus;
  if (mode == Enrichment::HRefine) {
    auto fine = std::make_shared<const Mesh>(refine_uniform(space->mesh()));
    plus = build_space(fine, space->degree(), space->components());
  } else {
    if (space->degree() != 1)
      throw std::invalid_argument("enrich: degree increase is only supported from p=1 to p=2");
    plus = build_space(space->mesh_ptr(), 2, space->components());
  }
  auto p = interpolation_operator(space, plus);
  return {plus, std::move(p)};
}

int locate_cell(const Mesh& m, const Point& x, double tol) {
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto lambda = CellGeometry(m, c).barycentric(x);
    bool inside = true;
    for (int i = 0; i <= m.dim; ++i) inside = inside && lambda[i] >= -tol;
    if (inside) return c;
  }
  return -1;
}

std::vector<FieldSample> evaluate(const CoeffVec& c, std::span<const Point> points) {
  const FeSpace& s = *c.space;
  const Mesh& m = s.mesh();
  const int nl = s.nodes_per_cell();
  std::vector<double> N(nl);
  std::vector<Point> G(nl);
  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (const Point& x : points) {
    const int cell = locate_cell(m, x);
    if (cell < 0)
      throw std::out_of_range("evaluate: point (" + std::to_string(x[0]) + ", " + std::to_string(x[1]) +
                              ") outside the domain");
    const CellGeometry geo(m, cell);
    const auto lambda = geo.barycentric(x);
    shape_values(m.dim, s.degree(), lambda, N);
    shape_gradients(m.dim, s.degree(), lambda, geo.grad_lambda, G);
    FieldSample sample;
    const auto nodes = s.cell_nodes(cell);
    for (int i = 0; i < nl; ++i) {
      for (int k = 0; k < s.components(); ++k) {
        const double coef = c.values[s.dof(nodes[i], k)];
        sample.value[k] += coef * N[i];
        sample.grad[k][0] += coef * G[i][0];
        sample.grad[k][1] += coef * G[i][1];
      }
    }
    out.push_back(sample);
  }
  return out;
}

}  // namespace goest
