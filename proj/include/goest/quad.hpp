#pragma once

#include <functional>
#include <vector>

#include "goest/types.hpp"

namespace goest {

/// Quadrature rule on a reference cell: the unit segment [0,1] (dim 1) or
/// the unit triangle {x, y >= 0, x + y <= 1} (dim 2).
struct QuadRule {
  int dim = 1;
  std::vector<Point> points;
  std::vector<double> weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
  double integrate(const std::function<double(const Point&)>& f) const;
};

/// Gauss-Legendre rule with n_points in 1..10 on [0,1].
QuadRule gauss_segment(int n_points);

/// Symmetric triangle rules of polynomial order 1, 2 or 4.
QuadRule gauss_triangle(int order);

/// Collapsed (Duffy) tensor Gauss rule on the unit triangle with n_points^2
/// nodes, exact for total degree 2 * n_points - 2.
QuadRule collapsed_triangle(int n_points);

/// Measure of the reference cell of the given dimension (1 or 1/2).
double reference_measure(int dim);

}  // namespace goest
