#include "goest/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace goest {

namespace {

constexpr double kFloorFactor = 8.0;

// || |A| |x| ||_2, the scale of roundoff in forming A x.
double abs_product_norm(const SparseMatrix& A, const Vector& x) {
  double sum = 0.0;
  for (int r = 0; r < A.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) row += std::abs(it.value() * x[it.col()]);
    sum += row * row;
  }
  return std::sqrt(sum);
}

}  // namespace

SolveResult solve_spd(const SystemPair& sys, const SolverOptions& opts) {
  const SparseMatrix& A = sys.matrix;
  const Vector& b = sys.rhs;
  const int n = static_cast<int>(b.size());
  const int max_it = opts.max_iterations > 0 ? opts.max_iterations : std::max(1000, 10 * n);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  SolveResult out{Vector::Zero(n), {}};
  const double b_norm = b.norm();
  out.report.effective_tolerance = opts.tolerance;
  if (b_norm == 0.0) {
    out.report.converged = true;
    return out;
  }

  Vector inv_diag(n);
  for (int i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    if (!(d > 0.0))
      throw SolverError(SolverErrc::Indefinite, "solve_spd: non-positive diagonal entry at row " + std::to_string(i));
    inv_diag[i] = 1.0 / d;
  }

  Vector& x = out.x;
  Vector r = b;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  Vector Ap(n);
  double rz = r.dot(z);
  const double target = opts.tolerance * b_norm;

  auto measure_true_residual = [&](double& rel, double& eff_tol) {
    Vector res = b - A * x;
    const double floor = kFloorFactor * eps * (abs_product_norm(A, x) + b_norm);
    rel = res.norm() / b_norm;
    eff_tol = std::max(opts.tolerance, floor / b_norm);
    return res;
  };

  for (int it = 1; it <= max_it; ++it) {
    Ap.noalias() = A * p;
    const double curvature = p.dot(Ap);
    if (!(curvature > 0.0))
      throw SolverError(SolverErrc::Indefinite, "solve_spd: non-positive curvature at iteration " + std::to_string(it),
                        out.report);
    const double alpha = rz / curvature;
    x.noalias() += alpha * p;
    r.noalias() -= alpha * Ap;
    out.report.iterations = it;

    if (r.norm() <= target || it % 50 == 0) {
      double rel = 0.0, eff_tol = 0.0;
      Vector res = measure_true_residual(rel, eff_tol);
      out.report.final_relative_residual = rel;
      out.report.effective_tolerance = eff_tol;
      if (rel <= eff_tol) {
        out.report.converged = true;
        return out;
      }
      if (r.norm() <= target) {
        // Recurrence drifted from the true residual: restart from it.
        r = std::move(res);
        z = inv_diag.cwiseProduct(r);
        p = z;
        rz = r.dot(z);
        continue;
      }
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw SolverError(SolverErrc::NotConverged,
                    "solve_spd: no convergence after " + std::to_string(max_it) + " iterations (relative residual " +
                        std::to_string(out.report.final_relative_residual) + ")",
                    out.report);
}

Vector solve_dense(const SystemPair& sys) {
  const auto n = sys.rhs.size();
  if (n >= kDenseSolveLimit)
    throw SolverError(SolverErrc::TooLarge, "solve_dense: " + std::to_string(n) + " unknowns exceeds the dense limit");
  const Eigen::MatrixXd dense(sys.matrix);
  return dense.fullPivLu().solve(sys.rhs);
}

}  // namespace goest
