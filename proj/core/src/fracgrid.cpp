#include "fracvar/fracgrid.hpp"

#include <cmath>
#include <string>

#include "fracvar/error.hpp"
#include "fracvar/special.hpp"

namespace fracvar {
namespace {

void require_same_grid(const Grid& expected, const Grid& actual, const char* what) {
  if (!(expected == actual)) {
    throw GridMismatchError(std::string(what) + ": function grid [" + std::to_string(actual.a()) +
                            ", " + std::to_string(actual.b()) + "] x " +
                            std::to_string(actual.size()) + " does not match operator grid [" +
                            std::to_string(expected.a()) + ", " + std::to_string(expected.b()) +
                            "] x " + std::to_string(expected.size()));
  }
}

}  // namespace

Grid::Grid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), h_(0.0) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw InvalidArgument("Grid: requires finite a < b");
  }
  if (n < 3) throw InvalidArgument("Grid: requires at least 3 nodes, got " + std::to_string(n));
  h_ = (b - a) / static_cast<double>(n - 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> t(n_);
  for (std::size_t i = 0; i < n_; ++i) t[i] = node(i);
  return t;
}

SampledFunction::SampledFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatchError("SampledFunction: " + std::to_string(values_.size()) +
                            " values for a grid of " + std::to_string(grid_.size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("SampledFunction: non-finite value at node " + std::to_string(i));
    }
  }
}

SampledFunction SampledFunction::zeros(const Grid& grid) {
  return SampledFunction(grid, std::vector<double>(grid.size(), 0.0));
}

SampledFunction SampledFunction::sample(const Grid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
  return SampledFunction(grid, std::move(v));
}

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("fractional order alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

std::vector<double> gl_weights(double alpha, std::size_t count) {
  std::vector<double> w(count);
  if (count == 0) return w;
  w[0] = 1.0;
  for (std::size_t j = 1; j < count; ++j) {
    w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / static_cast<double>(j));
  }
  return w;
}

std::vector<double> gl_weights(const FracOrder& order, std::size_t count) {
  return gl_weights(order.value(), count);
}

FracOperator::FracOperator(Grid grid, FracOrder order, Side side)
    : grid_(grid), order_(order), side_(side) {
  const std::size_t n = grid_.size();
  const std::vector<double> w = gl_weights(order_, n);
  const double scale = std::pow(grid_.spacing(), -order_.value());
  weights_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (side_ == Side::Left) {
      for (std::size_t j = 0; j <= i; ++j) weights_(i, i - j) = scale * w[j];
    } else {
      for (std::size_t j = 0; i + j < n; ++j) weights_(i, i + j) = scale * w[j];
    }
  }
}

FracOperator assemble_frac_operator(const Grid& grid, const FracOrder& order, Side side) {
  return FracOperator(grid, order, side);
}

SampledFunction apply(const FracOperator& op, const SampledFunction& f) {
  require_same_grid(op.grid(), f.grid(), "apply");
  const auto n = static_cast<Eigen::Index>(f.size());
  std::vector<double> out(f.size());
  Eigen::Map<const Eigen::VectorXd> x(f.values().data(), n);
  Eigen::Map<Eigen::VectorXd> y(out.data(), n);
  if (op.side() == Side::Left) {
    y.noalias() = op.weights().triangularView<Eigen::Lower>() * x;
  } else {
    y.noalias() = op.weights().triangularView<Eigen::Upper>() * x;
  }
  return SampledFunction(f.grid(), std::move(out));
}

SampledFunction apply_left_split(const FracOperator& left, const SampledFunction& f) {
  if (left.side() != Side::Left) {
    throw InvalidArgument("apply_left_split: requires a left operator");
  }
  require_same_grid(left.grid(), f.grid(), "apply_left_split");
  const double fa = f.front();
  if (fa == 0.0) return apply(left, f);

  const Grid& grid = f.grid();
  std::vector<double> shifted(f.values().begin(), f.values().end());
  for (double& v : shifted) v -= fa;
  SampledFunction regular = apply(left, SampledFunction(grid, std::move(shifted)));

  const double alpha = left.order().value();
  const double c = fa * reciprocal_gamma(1.0 - alpha);
  std::vector<double> out(regular.values().begin(), regular.values().end());
  out[0] = left.weights()(0, 0) * fa;
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] += c * std::pow(grid.node(i) - grid.a(), -alpha);
  }
  return SampledFunction(grid, std::move(out));
}

SampledFunction classical_derivative(const SampledFunction& f) {
  const std::size_t n = f.size();
  const double inv2h = 0.5 / f.grid().spacing();
  const auto v = f.values();
  std::vector<double> d(n);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) * inv2h;
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv2h;
  return SampledFunction(f.grid(), std::move(d));
}

std::vector<double> classical_derivative_adjoint(std::span<const double> q, double h) {
  const std::size_t n = q.size();
  if (n < 3) throw InvalidArgument("classical_derivative_adjoint: requires at least 3 values");
  const double inv2h = 0.5 / h;
  std::vector<double> out(n, 0.0);
  // Scatter each stencil row i of D into column entries of D^T q.
  out[0] += -3.0 * q[0] * inv2h;
  out[1] += 4.0 * q[0] * inv2h;
  out[2] += -q[0] * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i + 1] += q[i] * inv2h;
    out[i - 1] -= q[i] * inv2h;
  }
  out[n - 1] += 3.0 * q[n - 1] * inv2h;
  out[n - 2] += -4.0 * q[n - 1] * inv2h;
  out[n - 3] += q[n - 1] * inv2h;
  return out;
}

Eigen::MatrixXd classical_derivative_matrix(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double inv2h = 0.5 / grid.spacing();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d(0, 0) = -3.0 * inv2h;
  d(0, 1) = 4.0 * inv2h;
  d(0, 2) = -inv2h;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    d(i, i - 1) = -inv2h;
    d(i, i + 1) = inv2h;
  }
  d(n - 1, n - 1) = 3.0 * inv2h;
  d(n - 1, n - 2) = -4.0 * inv2h;
  d(n - 1, n - 3) = inv2h;
  return d;
}

double trapezoid_integral(const SampledFunction& f) {
  const auto v = f.values();
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i];
  return f.grid().spacing() * (0.5 * (v.front() + v.back()) + interior);
}

std::vector<double> trapezoid_weights(const Grid& grid) {
  std::vector<double> w(grid.size(), grid.spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

std::vector<double> compatible_weights(const Grid& grid) {
  std::vector<double> w = trapezoid_weights(grid);
  const double q = 0.25 * grid.spacing();
  const std::size_t n = w.size();
  w[0] -= q;
  w[1] += q;
  w[n - 1] -= q;
  w[n - 2] += q;
  return w;
}

}  // namespace fracvar
