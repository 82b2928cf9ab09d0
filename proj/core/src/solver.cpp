#include "fracvar/solver.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <vector>

namespace fracvar {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr double kStallDecrease = 1e-14;
constexpr int kStallLimit = 10;
constexpr int kMaxOuter = 200;

using Vec = Eigen::VectorXd;

/// Initial inverse-Hessian operator for the two-loop recursion.
class Preconditioner {
 public:
  Preconditioner() = default;

  explicit Preconditioner(const Eigen::MatrixXd& hess) {
    const double scale = hess.diagonal().cwiseAbs().maxCoeff();
    double shift = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::MatrixXd shifted = hess;
      shifted.diagonal().array() += shift;
      llt_.compute(shifted);
      if (llt_.info() == Eigen::Success) {
        valid_ = true;
        return;
      }
      shift = shift == 0.0 ? 1e-10 * std::max(scale, 1e-300) : shift * 100.0;
    }
  }

  bool valid() const noexcept { return valid_; }
  Vec apply(const Vec& q) const { return llt_.solve(q); }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool valid_ = false;
};

/// Reuses a factorization when the sampled second partials repeat, as they
/// do across multiplier probes for integrands quadratic in (y, v).
struct PreconditionerCache {
  std::optional<SecondPartials> key;
  Preconditioner value;

  const Preconditioner& get(const Problem& p, const SampledFunction& y, double lambda) {
    SecondPartials s = second_partials(p, y, lambda);
    if (!key || !(*key == s)) {
      value = Preconditioner(discrete_hessian(p, y, lambda));
      key = std::move(s);
    }
    return value;
  }
};

SampledFunction embed(const Problem& p, const Vec& x) {
  std::vector<double> y(p.grid().size());
  y.front() = p.ya();
  y.back() = p.yb();
  for (Eigen::Index i = 0; i < x.size(); ++i) y[static_cast<std::size_t>(i) + 1] = x(i);
  return SampledFunction(p.grid(), std::move(y));
}

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Objective at x, or +inf when y leaves the integrand's domain.
double try_value(const Problem& p, const Vec& x, double lambda) {
  try {
    const double f = augmented_value(p, embed(p, x), lambda);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

struct InnerResult {
  SampledFunction y;
  double grad_norm;
  int iterations;
  bool converged;
};

InnerResult minimize(const Problem& p, double lambda, const SolverOptions& opts,
                     PreconditionerCache& cache) {
  const SampledFunction y0 = p.affine_initial();
  Vec x = Eigen::Map<const Vec>(y0.values().data() + 1,
                                static_cast<Eigen::Index>(y0.size() - 2));

  double f = augmented_value(p, y0, lambda);
  if (!std::isfinite(f)) {
    throw DomainError("objective is not finite at the initial iterate");
  }
  Vec g = to_vec(discrete_gradient(p, y0, lambda));
  const Preconditioner* pre = &cache.get(p, y0, lambda);

  std::deque<Vec> s_hist;
  std::deque<Vec> y_hist;
  std::deque<double> rho_hist;
  int stall = 0;
  int iter = 0;
  bool converged = false;

  while (true) {
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      converged = true;
      break;
    }
    if (iter >= opts.max_iters || stall >= kStallLimit) break;

    // Two-loop recursion.
    Vec q = -g;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t i = m; i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (pre->valid()) {
      q = pre->apply(q);
    } else if (m > 0) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vec d = q;
    double slope = g.dot(d);
    if (!(slope < 0.0) || !d.allFinite()) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      slope = g.dot(d);
    }

    double step = 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    Vec x_new;
    bool accepted = false;
    for (int k = 0; k < kMaxBacktracks; ++k) {
      x_new = x + step * d;
      f_new = try_value(p, x_new, lambda);
      if (f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iter;
    if (!accepted) break;

    const Vec g_new = to_vec(discrete_gradient(p, embed(p, x_new), lambda));
    const Vec s = x_new - x;
    const Vec yk = g_new - g;
    const double sy = s.dot(yk);
    if (sy > 1e-12 * s.norm() * yk.norm()) {
      if (static_cast<int>(s_hist.size()) == opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(s);
      y_hist.push_back(yk);
      rho_hist.push_back(1.0 / sy);
    }

    const double decrease = (f - f_new) / std::max(std::abs(f), 1e-300);
    stall = decrease < kStallDecrease ? stall + 1 : 0;
    x = x_new;
    f = f_new;
    g = g_new;
    // The objective no longer resolves progress; take Newton steps from the
    // Hessian at the current iterate.
    if (stall == 1) {
      pre = &cache.get(p, embed(p, x), lambda);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
  }

  return {embed(p, x), g.lpNorm<Eigen::Infinity>(), iter, converged};
}

Solution finish(const Problem& p, InnerResult r, std::optional<double> lambda) {
  Solution s{std::move(r.y), 0.0, std::nullopt, 0.0, 0.0, std::nullopt, 0, 0, false};
  s.objective = functional_value(p, s.y);
  s.lambda = lambda;
  s.el_norm = el_residual(p, s.y, lambda).norm_max_interior;
  s.grad_norm = r.grad_norm;
  s.iterations = r.iterations;
  s.inner_iterations = r.iterations;
  s.converged = r.converged;
  if (lambda) s.constraint_residual = constraint_value(p, s.y) - p.constraint()->value;
  return s;
}

bool is_energy_family(const Problem& p) {
  return p.f().canonical_text() == "v^2" && p.constraint()->g.canonical_text() == "v";
}

}  // namespace

void SolverOptions::validate() const {
  if (max_iters < 1) throw InvalidArgument("solver: max_iters must be at least 1");
  if (!(grad_tol > 0.0)) throw InvalidArgument("solver: grad_tol must be positive");
  if (!(constraint_tol > 0.0)) throw InvalidArgument("solver: constraint_tol must be positive");
  if (memory < 1) throw InvalidArgument("solver: memory must be at least 1");
  if (!(lambda_bracket.first < lambda_bracket.second)) {
    throw InvalidArgument("solver: lambda_bracket must satisfy lo < hi");
  }
}

Solution solve_unconstrained(const Problem& p, const SolverOptions& opts) {
  if (p.constrained()) {
    throw InvalidArgument("solve_unconstrained: problem carries a constraint");
  }
  opts.validate();
  PreconditionerCache cache;
  return finish(p, minimize(p, 0.0, opts, cache), std::nullopt);
}

Solution solve_fixed_multiplier(const Problem& p, double lambda, const SolverOptions& opts) {
  if (!p.constrained()) {
    throw InvalidArgument("solve_fixed_multiplier: problem has no constraint");
  }
  opts.validate();
  PreconditionerCache cache;
  return finish(p, minimize(p, lambda, opts, cache), lambda);
}

Solution solve_isoperimetric(const Problem& p, const SolverOptions& opts) {
  if (!p.constrained()) {
    throw InvalidArgument("solve_isoperimetric: problem has no constraint");
  }
  opts.validate();
  const auto [lo, hi] = opts.lambda_bracket;
  const double tol = opts.constraint_tol;

  PreconditionerCache cache;
  int probes = 0;
  int inner_total = 0;
  std::optional<Solution> best;

  auto probe = [&](double lambda) {
    Solution s = finish(p, minimize(p, lambda, opts, cache), lambda);
    ++probes;
    inner_total += s.inner_iterations;
    s.iterations = probes;
    s.inner_iterations = inner_total;
    s.converged = s.converged && std::abs(*s.constraint_residual) <= tol;
    if (!best || std::abs(*s.constraint_residual) < std::abs(*best->constraint_residual)) {
      best = s;
    }
    return s;
  };
  auto done = [&](Solution s) {
    s.converged = s.converged && std::abs(*s.constraint_residual) <= tol;
    return s;
  };

  const double seed = is_energy_family(p) ? 2.0 * p.constraint()->value : 0.0;
  double a = std::clamp(seed, lo, hi);
  Solution sa = probe(a);
  double fa = *sa.constraint_residual;
  if (std::abs(fa) <= tol) return done(std::move(sa));

  double delta = 0.1 * std::max(1.0, std::abs(a));
  double b = a + delta <= hi ? a + delta : a - delta;
  b = std::clamp(b, lo, hi);
  Solution sb = probe(b);
  double fb = *sb.constraint_residual;
  if (std::abs(fb) <= tol) return done(std::move(sb));

  bool hit_lo = a == lo || b == lo;
  bool hit_hi = a == hi || b == hi;

  // Secant steps with bounded expansion until the residual changes sign.
  while (std::signbit(fa) == std::signbit(fb)) {
    if (probes >= kMaxOuter) {
      throw BracketError("multiplier search exhausted its probe budget", *best);
    }
    const double step = b - a;
    double next = fb != fa ? b - fb * step / (fb - fa) : b + 4.0 * step;
    if (!std::isfinite(next)) next = b + 4.0 * step;
    const double max_move = 8.0 * std::abs(step);
    next = std::clamp(next, b - max_move, b + max_move);
    next = std::clamp(next, lo, hi);
    if (next == b || next == a) {
      if (!hit_hi) {
        next = hi;
      } else if (!hit_lo) {
        next = lo;
      } else {
        throw BracketError("constraint residual keeps its sign over the multiplier bracket [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]",
                           *best);
      }
    }
    hit_lo = hit_lo || next == lo;
    hit_hi = hit_hi || next == hi;
    a = b;
    fa = fb;
    sa = std::move(sb);
    b = next;
    sb = probe(b);
    fb = *sb.constraint_residual;
    if (std::abs(fb) <= tol) return done(std::move(sb));
  }

  // Illinois regula falsi on [a, b].
  while (probes < kMaxOuter) {
    const double x = (a * fb - b * fa) / (fb - fa);
    if (!(x != a && x != b) || !std::isfinite(x)) break;
    Solution sx = probe(x);
    const double fx = *sx.constraint_residual;
    if (std::abs(fx) <= tol) return done(std::move(sx));
    if (std::signbit(fx) != std::signbit(fb)) {
      a = b;
      fa = fb;
    } else {
      fa *= 0.5;
    }
    b = x;
    fb = fx;
  }
  Solution out = *best;
  out.iterations = probes;
  out.inner_iterations = inner_total;
  return done(std::move(out));
}

}  // namespace fracvar
