#pragma once

#include <cstddef>
#include <vector>

namespace fracvar {

/// Gamma function for real arguments. Throws DomainError at the poles
/// (0, -1, -2, ...) and OverflowError when the result exceeds double range.
double gamma(double x);

/// 1/Gamma(x). Total: zero at the poles and for arguments whose Gamma
/// overflows.
double reciprocal_gamma(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

/// Complementary error function.
double erfc(double x);

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;

  /// Throws InvalidArgument unless alpha > 0 and beta > 0.
  void validate() const;
};

/// Truncation policy for the Mittag-Leffler power series.
struct SeriesBudget {
  double rel_tol = 1e-15;
  std::size_t max_terms = 2000;
  /// Arguments with |z| above this are rejected outright.
  double max_abs_z = 30.0;
};

/// E_{alpha,beta}(z) = sum_j z^j / Gamma(alpha j + beta), summed with Kahan
/// compensation. When the alternating series cancels heavily the sum is
/// redone in quad precision. Throws NonConvergenceError if the term bound
/// is not met within the budget or the result cannot be trusted.
double mittag_leffler(const MLParams& params, double z, const SeriesBudget& budget = {});

/// Mittag-Leffler evaluator with the reciprocal-gamma coefficients
/// tabulated once, for kernels evaluated at many arguments.
class MittagLefflerSeries {
 public:
  explicit MittagLefflerSeries(MLParams params, SeriesBudget budget = {});

  double operator()(double z) const;

  const MLParams& params() const noexcept { return params_; }
  const SeriesBudget& budget() const noexcept { return budget_; }

 private:
  MLParams params_;
  SeriesBudget budget_;
  std::vector<double> coefficients_;
};

}  // namespace fracvar
