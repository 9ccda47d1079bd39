#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "goest/mesh.hpp"
#include "goest/quad.hpp"
#include "goest/types.hpp"

namespace goest {

/// Affine geometry of one simplex: vertex coordinates and the (constant)
/// gradients of its barycentric coordinates.
struct CellGeometry {
  int dim = 1;
  std::array<Point, 3> vertex{};
  std::array<Point, 3> grad_lambda{};
  double measure = 0.0;

  CellGeometry(const Mesh& m, int cell);
  std::array<double, 3> barycentric(const Point& x) const;
  Point map(const std::array<double, 3>& lambda) const;
};

/// Lagrange basis of degree 1 or 2 in barycentric form. Local node order:
/// vertices, then edge midpoints of (0,1), (1,2), (2,0) (just (0,1) in 1D).
int local_node_count(int dim, int degree);
void shape_values(int dim, int degree, const std::array<double, 3>& lambda, std::span<double> out);
void shape_gradients(int dim, int degree, const std::array<double, 3>& lambda,
                     const std::array<Point, 3>& grad_lambda, std::span<Point> out);

/// Continuous Lagrange space on a mesh with homogeneous Dirichlet DOFs on the
/// whole boundary. DOF = node * components + component.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int components);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int dim() const { return mesh_->dim; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  int n_nodes() const { return static_cast<int>(node_coords_.size()); }
  int n_dofs() const { return n_nodes() * components_; }
  int nodes_per_cell() const { return nodes_per_cell_; }

  const std::vector<Point>& node_coords() const { return node_coords_; }
  std::span<const int> cell_nodes(int c) const {
    return {cell_nodes_.data() + static_cast<std::size_t>(c) * nodes_per_cell_,
            static_cast<std::size_t>(nodes_per_cell_)};
  }
  int dof(int node, int component) const { return node * components_ + component; }
  Point dof_coord(int d) const { return node_coords_[d / components_]; }

  bool is_dirichlet(int d) const { return dirichlet_mask_[d]; }
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }

  /// Zeroes the constrained entries of v.
  void mask_dirichlet(Vector& v) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int components_;
  int nodes_per_cell_;
  std::vector<Point> node_coords_;
  std::vector<int> cell_nodes_;
  std::vector<bool> dirichlet_mask_;
  std::vector<int> dirichlet_dofs_;
};

using SpacePtr = std::shared_ptr<const FeSpace>;

SpacePtr build_space(std::shared_ptr<const Mesh> mesh, int degree, int components);

/// Coefficients of a field in a specific space.
struct CoeffVec {
  SpacePtr space;
  Vector values;

  static CoeffVec zero(const SpacePtr& s) { return {s, Vector::Zero(s->n_dofs())}; }
};

using VectorField = std::function<std::array<double, 2>(const Point&)>;

/// Nodal interpolant of a closed-form field.
CoeffVec interpolate(const SpacePtr& space, const VectorField& f);

/// Shape values and physical gradients at the quadrature points of one cell.
struct CellValues {
  int n_q = 0;
  int n_local = 0;
  std::vector<Point> x;
  std::vector<double> JxW;
  std::vector<double> N;      // [q * n_local + i]
  std::vector<Point> grad_N;  // [q * n_local + i]

  CellValues(const FeSpace& space, int cell, const QuadRule& rule);
  double shape(int q, int i) const { return N[q * n_local + i]; }
  const Point& grad(int q, int i) const { return grad_N[q * n_local + i]; }
};

enum class Enrichment { HRefine, PIncrease };

/// Exact embedding of a coarse space into a nested finer one (n_to x n_from).
struct Prolongation {
  SpacePtr from;
  SpacePtr to;
  SparseMatrix matrix;

  CoeffVec apply(const CoeffVec& c) const;
};

/// Nodal interpolation from `from` into `to`. Requires the mesh of `to` to
/// descend from the mesh of `from` by uniform refinement (or be the same
/// mesh) and the same component count.
Prolongation interpolation_operator(const SpacePtr& from, const SpacePtr& to);

/// Enriched space V_h+ with the prolongation V_h -> V_h+.
std::pair<SpacePtr, Prolongation> enrich(const SpacePtr& space, Enrichment mode);

/// Value and gradient of each component at a point.
struct FieldSample {
  std::array<double, 2> value{};
  std::array<Point, 2> grad{};
};

/// First cell (in index order) containing the point, or -1.
int locate_cell(const Mesh& m, const Point& x, double tol = 1e-12);

std::vector<FieldSample> evaluate(const CoeffVec& c, std::span<const Point> points);

}  // namespace goest
