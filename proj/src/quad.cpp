#include "goest/quad.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace goest {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

double QuadRule::integrate(const std::function<double(const Point&)>& f) const {
  double sum = 0.0;
  for (int q = 0; q < size(); ++q) sum += weights[q] * f(points[q]);
  return sum;
}

double reference_measure(int dim) { return dim == 1 ? 1.0 : 0.5; }

QuadRule gauss_segment(int n_points) {
  if (n_points < 1 || n_points > 10)
    throw std::invalid_argument("gauss_segment: n_points must be in 1..10, got " + std::to_string(n_points));
  const int n = n_points;
  QuadRule rule;
  rule.dim = 1;
  rule.exact_degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);

  // Newton iteration on P_n over [-1,1]; roots come out in descending order,
  // so fill from the back to get ascending points on [0,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dpn] = legendre(n, x);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dpn = legendre(n, x).second;
    rule.points[n - 1 - i] = {0.5 * (x + 1.0), 0.0};
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dpn * dpn);
  }
  return rule;
}

QuadRule gauss_triangle(int order) {
  QuadRule rule;
  rule.dim = 2;
  switch (order) {
    case 1:
      rule.exact_degree = 1;
      rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {0.5};
      break;
    case 2:
      rule.exact_degree = 2;
      rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
      rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      break;
    case 4: {
      // Dunavant's 6-point rule.
      constexpr double a = 0.445948490915964886318329253883;
      constexpr double b = 0.091576213509770743459571463402;
      constexpr double wa = 0.223381589678011465944827343264 / 2.0;
      constexpr double wb = 0.109951743655321867388505990069 / 2.0;
      rule.exact_degree = 4;
      rule.points = {{a, a}, {1.0 - 2.0 * a, a}, {a, 1.0 - 2.0 * a},
                     {b, b}, {1.0 - 2.0 * b, b}, {b, 1.0 - 2.0 * b}};
      rule.weights = {wa, wa, wa, wb, wb, wb};
      break;
    }
    default:
      throw std::invalid_argument("gauss_triangle: unsupported order " + std::to_string(order));
  }
  return rule;
}

QuadRule collapsed_triangle(int n_points) {
  const QuadRule g = gauss_segment(n_points);
  QuadRule rule;
  rule.dim = 2;
  rule.exact_degree = 2 * n_points - 2;
  for (int i = 0; i < g.size(); ++i) {
    const double xi = g.points[i][0];
    for (int j = 0; j < g.size(); ++j) {
      const double eta = g.points[j][0];
      rule.points.push_back({xi, eta * (1.0 - xi)});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - xi));
    }
  }
  return rule;
}

}  // namespace goest
