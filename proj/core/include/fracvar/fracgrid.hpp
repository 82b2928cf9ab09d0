#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracvar {

/// Uniform grid a = t_0 < t_1 < ... < t_{n-1} = b.
class Grid {
 public:
  /// Throws InvalidArgument unless a < b (both finite) and n >= 3.
  Grid(double a, double b, std::size_t n);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }

  /// t_i; the last node is b exactly.
  double node(std::size_t i) const noexcept {
    return i + 1 == n_ ? b_ : a_ + static_cast<double>(i) * h_;
  }
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double a_;
  double b_;
  std::size_t n_;
  double h_;
};

/// Real function sampled on a grid. All values are finite.
class SampledFunction {
 public:
  SampledFunction(Grid grid, std::vector<double> values);

  static SampledFunction zeros(const Grid& grid);
  static SampledFunction sample(const Grid& grid, const std::function<double(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Order of a Riemann-Liouville derivative, restricted to 0 < alpha < 1.
class FracOrder {
 public:
  explicit FracOrder(double alpha);
  double value() const noexcept { return alpha_; }

  friend bool operator==(const FracOrder&, const FracOrder&) = default;

 private:
  double alpha_;
};

enum class Side { Left, Right };

/// Grunwald-Letnikov coefficients w_j = (-1)^j binom(alpha, j), j < count,
/// from the recurrence w_j = w_{j-1} (1 - (alpha + 1) / j). Any real alpha
/// is accepted so the integer-order limits can be checked.
std::vector<double> gl_weights(double alpha, std::size_t count);
std::vector<double> gl_weights(const FracOrder& order, std::size_t count);

/// Dense triangular Grunwald-Letnikov matrix for the left (lower) or right
/// (upper) Riemann-Liouville derivative. Every entry is w_j / h^alpha.
///
/// Row 0 of the left operator and row n-1 of the right operator sit at the
/// endpoint where the true derivative of a function not vanishing there is
/// infinite. They are filled by the same formula but reported as boundary
/// rows and left out of every norm.
class FracOperator {
 public:
  FracOperator(Grid grid, FracOrder order, Side side);

  const Grid& grid() const noexcept { return grid_; }
  const FracOrder& order() const noexcept { return order_; }
  Side side() const noexcept { return side_; }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }

  bool is_boundary_row(std::size_t i) const noexcept {
    return side_ == Side::Left ? i == 0 : i + 1 == grid_.size();
  }

 private:
  Grid grid_;
  FracOrder order_;
  Side side_;
  Eigen::MatrixXd weights_;
};

FracOperator assemble_frac_operator(const Grid& grid, const FracOrder& order, Side side);

/// Matrix-vector product. Throws GridMismatchError if f lives on another grid.
SampledFunction apply(const FracOperator& op, const SampledFunction& f);

/// Left derivative with the endpoint value split off:
///   D^a f = GL[f - f(a)] + f(a) (t - a)^{-alpha} / Gamma(1 - alpha)
/// at interior nodes. Row 0 keeps the plain GL value. Equal to apply() when
/// f(a) == 0. Requires a left operator.
SampledFunction apply_left_split(const FracOperator& left, const SampledFunction& f);

/// Second-order central differences inside, second-order one-sided
/// stencils at both ends.
SampledFunction classical_derivative(const SampledFunction& f);

/// Transpose of the classical_derivative stencil applied to raw values.
std::vector<double> classical_derivative_adjoint(std::span<const double> values, double h);

/// The classical_derivative stencil as a dense n x n matrix.
Eigen::MatrixXd classical_derivative_matrix(const Grid& grid);

/// Composite trapezoid rule.
double trapezoid_integral(const SampledFunction& f);

/// Trapezoid weights (h/2, h, ..., h, h/2).
std::vector<double> trapezoid_weights(const Grid& grid);

/// Trapezoid weights with the end pairs shifted to (h/4, 5h/4) and
/// (5h/4, h/4). Still exact on affine integrands, and paired with
/// classical_derivative they integrate any sampled derivative exactly:
/// sum_i w_i (D y)_i = y_{n-1} - y_0.
std::vector<double> compatible_weights(const Grid& grid);

}  // namespace fracvar
