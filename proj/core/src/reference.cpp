#include "fracvar/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracvar/error.hpp"
#include "fracvar/quadrature.hpp"
#include "fracvar/special.hpp"

namespace fracvar {
namespace {

constexpr double kPanelTol = 1e-12;

/// Kernel s -> E_{1-alpha,1}(-k s^{1-alpha}) and its integral over [lo, hi].
class Kernel {
 public:
  Kernel(double k, const FracOrder& order)
      : k_(k), beta_(1.0 - order.value()), series_(make_series(beta_)) {}

  double operator()(double s) const { return k_ == 0.0 ? 1.0 : series_(-k_ * std::pow(s, beta_)); }

  /// Integral over [0, hi]. For beta < 1/2 the substitution u = s^beta
  /// turns the endpoint behaviour into a smooth power.
  double from_zero(double hi) const {
    if (hi == 0.0) return 0.0;
    if (k_ == 0.0) return hi;
    if (beta_ < 0.5) {
      const double expo = 1.0 / beta_ - 1.0;
      auto g = [this, expo](double u) {
        return series_(-k_ * u) * std::pow(u, expo) / beta_;
      };
      return integrate_adaptive(g, 0.0, std::pow(hi, beta_), kPanelTol).value;
    }
    return over(0.0, hi);
  }

  double over(double lo, double hi) const {
    if (k_ == 0.0) return hi - lo;
    return integrate_adaptive([this](double s) { return (*this)(s); }, lo, hi, kPanelTol).value;
  }

 private:
  static MittagLefflerSeries make_series(double beta) {
    SeriesBudget budget;
    // Small ML orders make the reciprocal gammas decay slowly.
    budget.max_terms = std::max<std::size_t>(2000, static_cast<std::size_t>(std::ceil(40.0 / beta)));
    return MittagLefflerSeries(MLParams{beta, 1.0}, budget);
  }

  double k_;
  double beta_;
  MittagLefflerSeries series_;
};

}  // namespace

void ReferenceSpec::validate() const {
  if (grid.a() != 0.0) {
    throw InvalidArgument("reference: the grid must start at 0, got a=" + std::to_string(grid.a()));
  }
  if (!std::isfinite(k) || !std::isfinite(xi)) {
    throw InvalidArgument("reference: k and xi must be finite");
  }
}

SampledFunction ml_convolution_extremal(const ReferenceSpec& spec) {
  spec.validate();
  const Kernel kernel(spec.k, spec.order);
  const std::size_t n = spec.grid.size();
  std::vector<double> y(n, 0.0);
  if (spec.k == 0.0) {
    for (std::size_t i = 0; i < n; ++i) y[i] = spec.xi * spec.grid.node(i);
    return SampledFunction(spec.grid, std::move(y));
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = spec.grid.node(i - 1);
    const double hi = spec.grid.node(i);
    acc += i == 1 ? kernel.from_zero(hi) : kernel.over(lo, hi);
    y[i] = spec.xi * acc;
  }
  return SampledFunction(spec.grid, std::move(y));
}

double reference_value(double k, const FracOrder& order, double xi, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument("reference_value: t must be finite and nonnegative");
  }
  if (!std::isfinite(k) || !std::isfinite(xi)) {
    throw InvalidArgument("reference_value: k and xi must be finite");
  }
  return xi * Kernel(k, order).from_zero(t);
}

double boundary_value(const ReferenceSpec& spec) {
  spec.validate();
  return reference_value(spec.k, spec.order, spec.xi, spec.grid.b());
}

double closed_form_alpha_half(double t, double xi) {
  if (!(t >= 0.0)) throw InvalidArgument("closed_form_alpha_half: t must be nonnegative");
  const double r = std::sqrt(t);
  return xi * (std::exp(t) * fracvar::erfc(r) - 1.0 + 2.0 * r * std::numbers::inv_sqrtpi);
}

}  // namespace fracvar
