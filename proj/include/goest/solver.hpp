#pragma once

#include <stdexcept>
#include <string>

#include "goest/assembly.hpp"
#include "goest/types.hpp"

namespace goest {

struct SolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
  /// Tolerance actually enforced: the requested one, raised to the
  /// floating-point attainable level when that is larger (see solve_spd).
  double effective_tolerance = 0.0;
  bool converged = false;
};

enum class SolverErrc { NotConverged, Indefinite, TooLarge };

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrc code, const std::string& what, SolveReport report = {})
      : std::runtime_error(what), code_(code), report_(report) {}
  SolverErrc code() const { return code_; }
  const SolveReport& report() const { return report_; }

 private:
  SolverErrc code_;
  SolveReport report_;
};

struct SolverOptions {
  double tolerance = 1e-12;
  /// 0 selects max(1000, 10 * n).
  int max_iterations = 0;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Diagonally preconditioned conjugate gradients.
///
/// Stops once ||b - A x||_2 <= tol ||b||_2, where the residual is recomputed
/// from scratch (not the CG recurrence). When the requested tolerance lies
/// below what double precision can represent for this system, i.e. below
/// 8 eps (|| |A||x| ||_2 + ||b||_2), that floor is enforced instead and
/// reported in effective_tolerance. b = 0 returns x = 0 without iterating.
///
/// Throws SolverError{Indefinite} on non-positive curvature and
/// SolverError{NotConverged} at the iteration cap.
SolveResult solve_spd(const SystemPair& sys, const SolverOptions& opts = {});

/// Dense LU solve for systems below 500 unknowns; the cross-check oracle for
/// solve_spd. Throws SolverError{TooLarge} above that size.
Vector solve_dense(const SystemPair& sys);

inline constexpr int kDenseSolveLimit = 500;

}  // namespace goest
