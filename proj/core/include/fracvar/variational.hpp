#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

#include "fracvar/fracgrid.hpp"
#include "fracvar/lagrangian.hpp"

namespace fracvar {

/// Integral constraint  int_a^b G(t, y, v) dt = value.
struct Constraint {
  Lagrangian g;
  double value;
};

/// Minimize  J(y) = int_a^b F(t, y, y' + k D^alpha y) dt  over y with fixed
/// endpoint values, optionally subject to a Constraint.
class Problem {
 public:
  /// Throws InvalidArgument when ya, yb, k or the constraint value are not
  /// finite.
  Problem(Lagrangian f, double k, FracOrder order, Grid grid, double ya, double yb,
          std::optional<Constraint> constraint = std::nullopt);

  const Lagrangian& f() const noexcept { return f_; }
  const std::optional<Constraint>& constraint() const noexcept { return constraint_; }
  bool constrained() const noexcept { return constraint_.has_value(); }
  double k() const noexcept { return k_; }
  const FracOrder& order() const noexcept { return order_; }
  const Grid& grid() const noexcept { return grid_; }
  double ya() const noexcept { return ya_; }
  double yb() const noexcept { return yb_; }

  const FracOperator& left() const noexcept { return *left_; }
  const FracOperator& right() const noexcept { return *right_; }

  /// Affine interpolant of the boundary data.
  SampledFunction affine_initial() const;

  /// Copy of this problem with the constraint removed and F replaced.
  Problem with_integrand(Lagrangian f) const;

 private:
  Lagrangian f_;
  std::optional<Constraint> constraint_;
  double k_;
  FracOrder order_;
  Grid grid_;
  double ya_;
  double yb_;
  std::shared_ptr<const FracOperator> left_;
  std::shared_ptr<const FracOperator> right_;
};

struct CombinedDerivative {
  SampledFunction v;
  SampledFunction yprime;
  SampledFunction frac;
};

struct ELResidual {
  SampledFunction values;
  double norm_max_interior = 0.0;
  /// sqrt(h * sum r_i^2) over interior nodes.
  double norm_l2_interior = 0.0;
};

/// v = y' + k D^alpha y, with the left derivative evaluated by the
/// boundary split so y(a) != 0 is handled.
CombinedDerivative combined_derivative(const Problem& p, const SampledFunction& y);

/// Value of J at y under compatible_weights quadrature.
double functional_value(const Problem& p, const SampledFunction& y);

/// Value of the functional of H = F - lambda G.
double augmented_value(const Problem& p, const SampledFunction& y, double lambda);

/// Value of the constraint integral, same quadrature. Throws InvalidArgument when
/// the problem has no constraint.
double constraint_value(const Problem& p, const SampledFunction& y);

/// Nodewise residual  dH/dy - d/dt dH/dv + k D_right^alpha dH/dv  with
/// H = F - lambda G. Lambda is required exactly when the problem is
/// constrained.
ELResidual el_residual(const Problem& p, const SampledFunction& y,
                       std::optional<double> lambda = std::nullopt);

/// Gradient of the discretized functional of H = F - lambda G with respect
/// to the interior values y_1..y_{n-2}. The plain overload uses H = F.
/// Throws InvalidArgument when the endpoint values of y differ from ya, yb.
std::vector<double> discrete_gradient(const Problem& p, const SampledFunction& y);
std::vector<double> discrete_gradient(const Problem& p, const SampledFunction& y, double lambda);

/// Hessian of the same discretized functional on the interior block.
Eigen::MatrixXd discrete_hessian(const Problem& p, const SampledFunction& y, double lambda = 0.0);

/// Sampled second partials (dyy, dyv, dvv) of H at y; identical vectors mean
/// identical Hessians.
struct SecondPartials {
  std::vector<double> dyy;
  std::vector<double> dyv;
  std::vector<double> dvv;
  friend bool operator==(const SecondPartials&, const SecondPartials&) = default;
};
SecondPartials second_partials(const Problem& p, const SampledFunction& y, double lambda = 0.0);

/// Interior max-norm and the same restricted to nodes with t in [lo, hi].
double interior_max_norm(const SampledFunction& r);
double window_max_norm(const SampledFunction& r, double lo, double hi);

}  // namespace fracvar
