#include "goest/assembly.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace goest {

namespace {

QuadRule rule_for_degree(int dim, int degree) {
  if (dim == 1) return gauss_segment(std::clamp((degree + 2) / 2, 1, 10));
  if (degree <= 1) return gauss_triangle(1);
  if (degree == 2) return gauss_triangle(2);
  if (degree <= 4) return gauss_triangle(4);
  return collapsed_triangle(std::min((degree + 3) / 2, 10));
}

// Gradient of a field at a quadrature point: grad[k] = d(u_k)/dx.
using FieldGrad = std::array<Point, 2>;

FieldGrad field_gradient(const FeSpace& s, const CellValues& cv, std::span<const int> nodes, const Vector& u,
                         int q) {
  FieldGrad g{};
  for (int i = 0; i < cv.n_local; ++i) {
    const Point& dN = cv.grad(q, i);
    for (int k = 0; k < s.components(); ++k) {
      const double c = u[s.dof(nodes[i], k)];
      g[k][0] += c * dN[0];
      g[k][1] += c * dN[1];
    }
  }
  return g;
}

// Plane-strain stress from a displacement gradient.
std::array<std::array<double, 2>, 2> stress(const FieldGrad& g, const FormDef& form, int dim) {
  std::array<std::array<double, 2>, 2> eps{};
  double tr = 0.0;
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) eps[a][b] = 0.5 * (g[a][b] + g[b][a]);
    tr += eps[a][a];
  }
  std::array<std::array<double, 2>, 2> sig{};
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) sig[a][b] = 2.0 * form.mu * eps[a][b];
    sig[a][a] += form.lambda * tr;
  }
  return sig;
}

bool cell_selected(const Mesh& m, int c, std::optional<int> tag) {
  return !tag || m.cell_subdomain[c] == *tag;
}

}  // namespace

void check_compatible(const FeSpace& space, const FormDef& form) {
  if (form.kind == FormKind::Poisson) {
    if (space.components() != 1) throw std::invalid_argument("Poisson form requires a scalar space");
    return;
  }
  if (space.components() != space.dim())
    throw std::invalid_argument("elasticity form requires a vector space with one component per dimension");
  if (!(form.mu > 0.0) || form.lambda < 0.0)
    throw std::invalid_argument("elasticity form requires mu > 0 and lambda >= 0");
}

QuadRule stiffness_rule(const FeSpace& space) { return rule_for_degree(space.dim(), 2 * space.degree()); }

QuadRule high_order_rule(int dim) { return dim == 1 ? gauss_segment(10) : collapsed_triangle(8); }

SparseMatrix assemble_form(const FeSpace& space, const FormDef& form, std::optional<int> subdomain_tag) {
  check_compatible(space, form);
  const Mesh& m = space.mesh();
  const QuadRule rule = stiffness_rule(space);
  const int nl = space.nodes_per_cell();
  const int comps = space.components();
  const int nd = nl * comps;
  const int dim = space.dim();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m.n_cells()) * nd * nd);
  std::vector<double> Ke(static_cast<std::size_t>(nd) * nd);

  for (int c = 0; c < m.n_cells(); ++c) {
    if (!cell_selected(m, c, subdomain_tag)) continue;
    const CellValues cv(space, c, rule);
    std::fill(Ke.begin(), Ke.end(), 0.0);
    for (int q = 0; q < cv.n_q; ++q) {
      const double w = cv.JxW[q];
      for (int i = 0; i < nl; ++i) {
        const Point& gi = cv.grad(q, i);
        for (int j = 0; j < nl; ++j) {
          const Point& gj = cv.grad(q, j);
          const double dot = gi[0] * gj[0] + gi[1] * gj[1];
          if (form.kind == FormKind::Poisson) {
            Ke[i * nd + j] += w * dot;
            continue;
          }
          // Row (i, a), column (j, b): sigma(phi_jb) : eps(phi_ia).
          for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
              double v = form.lambda * gj[b] * gi[a] + form.mu * gj[a] * gi[b];
              if (a == b) v += form.mu * dot;
              Ke[(i * comps + a) * nd + (j * comps + b)] += w * v;
            }
          }
        }
      }
    }
    const auto nodes = space.cell_nodes(c);
    for (int i = 0; i < nl; ++i)
      for (int a = 0; a < comps; ++a)
        for (int j = 0; j < nl; ++j)
          for (int b = 0; b < comps; ++b)
            triplets.emplace_back(space.dof(nodes[i], a), space.dof(nodes[j], b),
                                  Ke[(i * comps + a) * nd + (j * comps + b)]);
  }
  SparseMatrix A(space.n_dofs(), space.n_dofs());
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

Vector assemble_load(const FeSpace& space, const LoadDef& load) {
  const Mesh& m = space.mesh();
  const QuadRule rule = load.poly_degree >= 0 ? rule_for_degree(space.dim(), space.degree() + load.poly_degree)
                                              : high_order_rule(space.dim());
  const int nl = space.nodes_per_cell();
  Vector b = Vector::Zero(space.n_dofs());
  for (int c = 0; c < m.n_cells(); ++c) {
    const CellValues cv(space, c, rule);
    const auto nodes = space.cell_nodes(c);
    for (int q = 0; q < cv.n_q; ++q) {
      const auto f = load.source(cv.x[q]);
      for (int i = 0; i < nl; ++i) {
        const double wN = cv.JxW[q] * cv.shape(q, i);
        for (int k = 0; k < space.components(); ++k) b[space.dof(nodes[i], k)] += wN * f[k];
      }
    }
  }
  return b;
}

SystemPair apply_dirichlet(const FeSpace& space, const SparseMatrix& matrix, const Vector& rhs) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(matrix.nonZeros());
  for (int r = 0; r < matrix.outerSize(); ++r) {
    if (space.is_dirichlet(r)) continue;
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it)
      if (!space.is_dirichlet(static_cast<int>(it.col()))) triplets.emplace_back(r, it.col(), it.value());
  }
  for (int d : space.dirichlet_dofs()) triplets.emplace_back(d, d, 1.0);
  SystemPair sys{SparseMatrix(matrix.rows(), matrix.cols()), rhs};
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  space.mask_dirichlet(sys.rhs);
  return sys;
}

double bilinear(const SparseMatrix& m, const Vector& a, const Vector& b) { return a.dot(m * b); }

double form_by_quadrature(const CoeffVec& a, const CoeffVec& b, const FormDef& form, ElasticIntegrand integrand,
                          std::optional<int> subdomain_tag) {
  if (a.space != b.space) throw std::invalid_argument("form_by_quadrature: fields live in different spaces");
  const FeSpace& s = *a.space;
  check_compatible(s, form);
  const Mesh& m = s.mesh();
  const QuadRule rule = stiffness_rule(s);
  const int dim = s.dim();
  double total = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    if (!cell_selected(m, c, subdomain_tag)) continue;
    const CellValues cv(s, c, rule);
    const auto nodes = s.cell_nodes(c);
    for (int q = 0; q < cv.n_q; ++q) {
      const FieldGrad ga = field_gradient(s, cv, nodes, a.values, q);
      const FieldGrad gb = field_gradient(s, cv, nodes, b.values, q);
      double val = 0.0;
      if (form.kind == FormKind::Poisson) {
        val = ga[0][0] * gb[0][0] + ga[0][1] * gb[0][1];
      } else {
        const auto sig = stress(ga, form, dim);
        for (int i = 0; i < dim; ++i) {
          for (int j = 0; j < dim; ++j) {
            const double test =
                integrand == ElasticIntegrand::StressGradient ? gb[i][j] : 0.5 * (gb[i][j] + gb[j][i]);
            val += sig[i][j] * test;
          }
        }
      }
      total += cv.JxW[q] * val;
    }
  }
  return total;
}

}  // namespace goest
