#include "fracvar/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracvar/error.hpp"

namespace fracvar {
namespace {

void require_grid(const Problem& p, const SampledFunction& y) {
  if (!(y.grid() == p.grid())) {
    throw GridMismatchError("trajectory grid does not match the problem grid");
  }
}

void require_boundary(const Problem& p, const SampledFunction& y) {
  if (y.front() != p.ya() || y.back() != p.yb()) {
    throw InvalidArgument("trajectory endpoints (" + std::to_string(y.front()) + ", " +
                          std::to_string(y.back()) + ") differ from the boundary values (" +
                          std::to_string(p.ya()) + ", " + std::to_string(p.yb()) + ")");
  }
}

[[noreturn]] void rethrow_at_node(const DomainError& e, std::size_t i, double t) {
  throw DomainError(std::string(e.what()) + " at node " + std::to_string(i) + " (t=" +
                    std::to_string(t) + ")");
}

double weighted_sum(const Grid& grid, const std::vector<double>& values) {
  const std::vector<double> w = compatible_weights(grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

/// Partials of H = F - lambda G at every node.
struct NodePartials {
  std::vector<double> value, dy, dv, dyy, dyv, dvv;
};

enum class Order { First, Second };

NodePartials node_partials(const Problem& p, const SampledFunction& y, const SampledFunction& v,
                           double lambda, Order order) {
  const std::size_t n = y.size();
  NodePartials out;
  out.value.resize(n);
  out.dy.resize(n);
  out.dv.resize(n);
  if (order == Order::Second) {
    out.dyy.resize(n);
    out.dyv.resize(n);
    out.dvv.resize(n);
  }
  const Lagrangian* g = p.constrained() && lambda != 0.0 ? &p.constraint()->g : nullptr;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = p.grid().node(i);
    try {
      PartialValues h = order == Order::Second ? p.f().all(t, y[i], v[i])
                                               : p.f().first_order(t, y[i], v[i]);
      if (g != nullptr) {
        const PartialValues q = order == Order::Second ? g->all(t, y[i], v[i])
                                                       : g->first_order(t, y[i], v[i]);
        h.value -= lambda * q.value;
        h.dy -= lambda * q.dy;
        h.dv -= lambda * q.dv;
        h.dyy -= lambda * q.dyy;
        h.dyv -= lambda * q.dyv;
        h.dvv -= lambda * q.dvv;
      }
      out.value[i] = h.value;
      out.dy[i] = h.dy;
      out.dv[i] = h.dv;
      if (order == Order::Second) {
        out.dyy[i] = h.dyy;
        out.dyv[i] = h.dyv;
        out.dvv[i] = h.dvv;
      }
    } catch (const DomainError& e) {
      rethrow_at_node(e, i, t);
    }
  }
  return out;
}

double integrate_lagrangian(const Problem& p, const Lagrangian& l, const SampledFunction& y) {
  const CombinedDerivative d = combined_derivative(p, y);
  std::vector<double> vals(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = p.grid().node(i);
    try {
      vals[i] = l.value(t, y[i], d.v[i]);
    } catch (const DomainError& e) {
      rethrow_at_node(e, i, t);
    }
  }
  return weighted_sum(p.grid(), vals);
}

std::vector<double> gradient_impl(const Problem& p, const SampledFunction& y, double lambda) {
  require_grid(p, y);
  require_boundary(p, y);
  const CombinedDerivative d = combined_derivative(p, y);
  const NodePartials h = node_partials(p, y, d.v, lambda, Order::First);
  const std::size_t n = y.size();
  const std::vector<double> w = compatible_weights(p.grid());

  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = w[i] * h.dv[i];
  const std::vector<double> dct = classical_derivative_adjoint(q, p.grid().spacing());
  // The right operator is the transpose of the left one.
  const SampledFunction lt = apply(p.right(), SampledFunction(p.grid(), q));

  std::vector<double> grad(n - 2);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    grad[j - 1] = w[j] * h.dy[j] + dct[j] + p.k() * lt[j];
  }
  return grad;
}

}  // namespace

Problem::Problem(Lagrangian f, double k, FracOrder order, Grid grid, double ya, double yb,
                 std::optional<Constraint> constraint)
    : f_(std::move(f)),
      constraint_(std::move(constraint)),
      k_(k),
      order_(order),
      grid_(grid),
      ya_(ya),
      yb_(yb),
      left_(std::make_shared<const FracOperator>(grid, order, Side::Left)),
      right_(std::make_shared<const FracOperator>(grid, order, Side::Right)) {
  if (!std::isfinite(k)) throw InvalidArgument("Problem: k must be finite");
  if (!std::isfinite(ya) || !std::isfinite(yb)) {
    throw InvalidArgument("Problem: boundary values must be finite");
  }
  if (constraint_ && !std::isfinite(constraint_->value)) {
    throw InvalidArgument("Problem: constraint value must be finite");
  }
}

SampledFunction Problem::affine_initial() const {
  const double slope = (yb_ - ya_) / (grid_.b() - grid_.a());
  std::vector<double> y(grid_.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = ya_ + slope * (grid_.node(i) - grid_.a());
  y.front() = ya_;
  y.back() = yb_;
  return SampledFunction(grid_, std::move(y));
}

Problem Problem::with_integrand(Lagrangian f) const {
  Problem copy = *this;
  copy.f_ = std::move(f);
  copy.constraint_.reset();
  return copy;
}

CombinedDerivative combined_derivative(const Problem& p, const SampledFunction& y) {
  require_grid(p, y);
  SampledFunction yprime = classical_derivative(y);
  SampledFunction frac = apply_left_split(p.left(), y);
  std::vector<double> v(y.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = yprime[i] + p.k() * frac[i];
  return {SampledFunction(p.grid(), std::move(v)), std::move(yprime), std::move(frac)};
}

double functional_value(const Problem& p, const SampledFunction& y) {
  return integrate_lagrangian(p, p.f(), y);
}

double augmented_value(const Problem& p, const SampledFunction& y, double lambda) {
  if (lambda == 0.0) return functional_value(p, y);
  if (!p.constrained()) throw InvalidArgument("augmented_value: problem has no constraint");
  const CombinedDerivative d = combined_derivative(p, y);
  const NodePartials h = node_partials(p, y, d.v, lambda, Order::First);
  return weighted_sum(p.grid(), h.value);
}

double constraint_value(const Problem& p, const SampledFunction& y) {
  if (!p.constrained()) throw InvalidArgument("constraint_value: problem has no constraint");
  return integrate_lagrangian(p, p.constraint()->g, y);
}

ELResidual el_residual(const Problem& p, const SampledFunction& y, std::optional<double> lambda) {
  require_grid(p, y);
  if (p.constrained() && !lambda) {
    throw InvalidArgument("el_residual: a multiplier is required for a constrained problem");
  }
  if (!p.constrained() && lambda) {
    throw InvalidArgument("el_residual: multiplier given for an unconstrained problem");
  }
  const CombinedDerivative d = combined_derivative(p, y);
  const NodePartials h = node_partials(p, y, d.v, lambda.value_or(0.0), Order::First);
  const SampledFunction hv(p.grid(), h.dv);
  const SampledFunction dt = classical_derivative(hv);
  const SampledFunction fr = apply(p.right(), hv);

  std::vector<double> r(y.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = h.dy[i] - dt[i] + p.k() * fr[i];
  ELResidual out{SampledFunction(p.grid(), std::move(r)), 0.0, 0.0};
  double sq = 0.0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sq += out.values[i] * out.values[i];
  out.norm_max_interior = interior_max_norm(out.values);
  out.norm_l2_interior = std::sqrt(p.grid().spacing() * sq);
  return out;
}

std::vector<double> discrete_gradient(const Problem& p, const SampledFunction& y) {
  return gradient_impl(p, y, 0.0);
}

std::vector<double> discrete_gradient(const Problem& p, const SampledFunction& y, double lambda) {
  if (lambda != 0.0 && !p.constrained()) {
    throw InvalidArgument("discrete_gradient: multiplier given for an unconstrained problem");
  }
  return gradient_impl(p, y, lambda);
}

SecondPartials second_partials(const Problem& p, const SampledFunction& y, double lambda) {
  require_grid(p, y);
  const CombinedDerivative d = combined_derivative(p, y);
  NodePartials h = node_partials(p, y, d.v, lambda, Order::Second);
  return {std::move(h.dyy), std::move(h.dyv), std::move(h.dvv)};
}

Eigen::MatrixXd discrete_hessian(const Problem& p, const SampledFunction& y, double lambda) {
  const SecondPartials s = second_partials(p, y, lambda);
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto m = n - 2;
  const std::vector<double> w = compatible_weights(p.grid());

  // Columns of d v / d y for the interior unknowns.
  Eigen::MatrixXd a = classical_derivative_matrix(p.grid()).middleCols(1, m);
  a.noalias() += p.k() * p.left().weights().middleCols(1, m);

  Eigen::VectorXd cyy(n), cyv(n), cvv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    cyy(i) = w[u] * s.dyy[u];
    cyv(i) = w[u] * s.dyv[u];
    cvv(i) = w[u] * s.dvv[u];
  }

  Eigen::MatrixXd hess(m, m);
  hess.noalias() = a.transpose() * (cvv.asDiagonal() * a);
  // Mixed terms: diag(cyv) A restricted to interior rows, plus its transpose.
  Eigen::MatrixXd mixed = cyv.segment(1, m).asDiagonal() * a.middleRows(1, m);
  hess += mixed + mixed.transpose();
  hess.diagonal() += cyy.segment(1, m);
  return hess;
}

double interior_max_norm(const SampledFunction& r) {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) m = std::max(m, std::abs(r[i]));
  return m;
}

double window_max_norm(const SampledFunction& r, double lo, double hi) {
  double m = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double t = r.grid().node(i);
    if (t >= lo && t <= hi) m = std::max(m, std::abs(r[i]));
  }
  return m;
}

}  // namespace fracvar
