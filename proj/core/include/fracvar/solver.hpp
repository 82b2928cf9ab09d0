#pragma once

#include <optional>
#include <utility>

#include "fracvar/error.hpp"
#include "fracvar/fracgrid.hpp"
#include "fracvar/variational.hpp"

namespace fracvar {

enum class LineSearch { BacktrackingArmijo };

struct SolverOptions {
  int max_iters = 500;
  /// Max-norm of the discrete gradient.
  double grad_tol = 1e-9;
  double constraint_tol = 1e-9;
  LineSearch line_search = LineSearch::BacktrackingArmijo;
  /// Number of stored quasi-Newton pairs.
  int memory = 10;
  std::pair<double, double> lambda_bracket{-1e6, 1e6};

  /// Throws InvalidArgument on nonpositive tolerances or counts, or an
  /// empty bracket.
  void validate() const;
};

struct Solution {
  SampledFunction y;
  /// J(y) for the original integrand F.
  double objective = 0.0;
  std::optional<double> lambda;
  /// Interior max-norm of the Euler-Lagrange residual (of H if constrained).
  double el_norm = 0.0;
  /// Max-norm of the discrete gradient at y.
  double grad_norm = 0.0;
  std::optional<double> constraint_residual;
  /// Quasi-Newton iterations, or outer multiplier probes when constrained.
  int iterations = 0;
  /// Quasi-Newton iterations summed over all probes.
  int inner_iterations = 0;
  bool converged = false;
};

/// The constraint residual kept the same sign over the whole multiplier
/// bracket. Carries the probe with the smallest residual.
class BracketError : public NonConvergenceError {
 public:
  BracketError(const std::string& message, Solution best)
      : NonConvergenceError(message), best_(std::move(best)) {}
  const Solution& best() const noexcept { return best_; }

 private:
  Solution best_;
};

/// Minimize the discretized functional over interior node values with
/// L-BFGS, starting from the affine interpolant. The initial inverse
/// Hessian is the exact discrete Hessian at the starting point. Returns the
/// best iterate with converged=false when the budget runs out or progress
/// stalls. Throws InvalidArgument for a constrained problem.
Solution solve_unconstrained(const Problem& p, const SolverOptions& opts = {});

/// Unconstrained minimization of H = F - lambda G for a fixed multiplier.
Solution solve_fixed_multiplier(const Problem& p, double lambda, const SolverOptions& opts = {});

/// Find lambda such that the minimizer of H = F - lambda G meets the
/// constraint: secant steps until the residual changes sign, then Illinois
/// regula falsi. Throws BracketError if no sign change exists in
/// opts.lambda_bracket.
Solution solve_isoperimetric(const Problem& p, const SolverOptions& opts = {});

}  // namespace fracvar
