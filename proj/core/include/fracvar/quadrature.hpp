#pragma once

#include <functional>

namespace fracvar {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]: the panel
/// with the largest |K15 - G7| is bisected until the summed estimate is at
/// most abs_tol (or at the rounding floor of the result). Throws
/// NonConvergenceError when a panel would exceed max_depth bisections.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth = 60);

/// Single G7/K15 panel.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b);

}  // namespace fracvar
