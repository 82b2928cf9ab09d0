#include "fracvar/special.hpp"

#include <quadmath.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fracvar/error.hpp"

namespace fracvar {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtTwoPi = 2.5066282746310005024;
constexpr double kHalfLogTwoPi = 0.91893853320467274178;
// Gamma(x) overflows a double for x beyond this.
constexpr double kMaxGammaArg = 171.62437695630272;

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Exact factorials (n-1)! for Gamma at the small positive integers.
constexpr std::array<double, 23> kFactorials = {
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the range reduction done exactly.
double sin_pi(double x) {
  const double n = std::round(x);
  const double s = std::sin(kPi * (x - n));
  return std::fmod(n, 2.0) != 0.0 ? -s : s;
}

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  return a;
}

// Gamma for x >= 0.5, x <= kMaxGammaArg.
double gamma_lanczos(double x) {
  if (x == std::floor(x) && x < static_cast<double>(kFactorials.size())) {
    return kFactorials[static_cast<std::size_t>(x) - 1];
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  // t^(x-1/2) is split in two halves so that it does not overflow before
  // the exponential damps it.
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return kSqrtTwoPi * half * (half * std::exp(-t)) * lanczos_sum(xm1);
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct QuadKahanSum {
  __float128 sum = 0;
  __float128 carry = 0;

  void add(__float128 x) {
    const __float128 y = x - carry;
    const __float128 t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Ratio of the largest term to |sum| above which the double-precision sum
// is considered to have cancelled too much.
constexpr double kCancellationLimit = 64.0;

struct SeriesResult {
  double sum = 0.0;
  double max_abs_term = 0.0;
};

[[noreturn]] void throw_non_convergence(const MLParams& p, double z, const std::string& why) {
  throw NonConvergenceError("mittag_leffler(alpha=" + format_number(p.alpha) +
                            ", beta=" + format_number(p.beta) + ", z=" + format_number(z) +
                            "): " + why);
}

// Term-ratio cutoff: two consecutive terms below rel_tol * |sum| and not
// increasing.
template <class Coefficient>
SeriesResult sum_series_double(const MLParams& p, double z, const SeriesBudget& budget,
                               Coefficient&& coefficient) {
  KahanSum acc;
  double zpow = 1.0;
  double prev = INFINITY;
  double max_abs = 0.0;
  int small_run = 0;
  for (std::size_t j = 0; j < budget.max_terms; ++j) {
    const double term = zpow * coefficient(j);
    if (!std::isfinite(term)) throw_non_convergence(p, z, "series term overflowed");
    acc.add(term);
    const double mag = std::abs(term);
    max_abs = std::max(max_abs, mag);
    if (j > 0 && mag <= budget.rel_tol * std::abs(acc.sum) && mag <= prev) {
      if (++small_run == 2) return {acc.sum, max_abs};
    } else {
      small_run = 0;
    }
    prev = mag;
    zpow *= z;
  }
  throw_non_convergence(p, z,
                        "term bound not reached within " + std::to_string(budget.max_terms) +
                            " terms");
}

// 2^-112, the quad-precision machine epsilon.
const __float128 kQuadEpsilon =
    static_cast<__float128>(1.0) / static_cast<__float128>(1ULL << 56) / static_cast<__float128>(1ULL << 56);

double sum_series_quad(const MLParams& p, double z, const SeriesBudget& budget) {
  QuadKahanSum acc;
  const __float128 zq = z;
  const __float128 alpha = p.alpha;
  const __float128 beta = p.beta;
  __float128 zpow = 1;
  __float128 prev = 0;
  __float128 max_abs = 0;
  int small_run = 0;
  for (std::size_t j = 0; j < budget.max_terms; ++j) {
    const __float128 g = tgammaq(alpha * static_cast<__float128>(j) + beta);
    const __float128 term = zpow / g;
    acc.add(term);
    const __float128 mag = fabsq(term);
    if (mag > max_abs) max_abs = mag;
    if (j > 0 && mag <= budget.rel_tol * fabsq(acc.sum) && mag <= prev) {
      if (++small_run == 2) {
        // Rounding in the largest terms must stay well below the tolerance.
        if (max_abs * kQuadEpsilon * 16 > budget.rel_tol * fabsq(acc.sum)) {
          throw_non_convergence(p, z, "cancellation exceeds extended precision");
        }
        return static_cast<double>(acc.sum);
      }
    } else {
      small_run = 0;
    }
    prev = mag;
    zpow *= zq;
  }
  throw_non_convergence(p, z,
                        "term bound not reached within " + std::to_string(budget.max_terms) +
                            " terms");
}

template <class Coefficient>
double evaluate_ml(const MLParams& p, double z, const SeriesBudget& budget,
                   Coefficient&& coefficient) {
  if (!std::isfinite(z)) throw DomainError("mittag_leffler: non-finite argument");
  if (std::abs(z) > budget.max_abs_z) {
    throw_non_convergence(p, z,
                          "argument outside the supported range |z| <= " +
                              format_number(budget.max_abs_z));
  }
  if (z == 0.0) return coefficient(0);
  const SeriesResult r = sum_series_double(p, z, budget, coefficient);
  if (r.max_abs_term <= kCancellationLimit * std::abs(r.sum)) return r.sum;
  return sum_series_quad(p, z, budget);
}

}  // namespace

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) {
    throw DomainError("gamma: pole at x = " + format_number(x));
  }
  if (x > kMaxGammaArg) {
    throw OverflowError("gamma: result overflows for x = " + format_number(x));
  }
  if (x >= 0.5) return gamma_lanczos(x);
  // Reflection.
  const double reflected = 1.0 - x;
  if (reflected > kMaxGammaArg) return 0.0;
  const double result = kPi / (sin_pi(x) * gamma_lanczos(reflected));
  if (!std::isfinite(result)) {
    throw OverflowError("gamma: result overflows for x = " + format_number(x));
  }
  return result;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0, got " + format_number(x));
  if (x < 12.0) return std::log(gamma(x));
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return kHalfLogTwoPi + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double reciprocal_gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > kMaxGammaArg) return std::exp(-log_gamma(x));
  if (x >= 0.5) return 1.0 / gamma_lanczos(x);
  const double reflected = 1.0 - x;
  if (reflected > kMaxGammaArg) {
    return sin_pi(x) * std::exp(log_gamma(reflected)) / kPi;
  }
  return sin_pi(x) * gamma_lanczos(reflected) / kPi;
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  constexpr double kTwoOverSqrtPi = std::numbers::inv_sqrtpi * 2.0;
  if (x < 1.5) {
    // erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!, all terms positive.
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200 && term > 1e-17 * sum; ++n) {
      term *= 2.0 * x2 / (2.0 * n + 1.0);
      sum += term;
    }
    return 1.0 - kTwoOverSqrtPi * std::exp(-x2) * sum;
  }
  if (x > 27.3) return 0.0;
  // Continued fraction x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), modified Lentz.
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int m = 1; m < 5000; ++m) {
    const double a = 0.5 * m;
    d = x + a * d;
    if (d == 0.0) d = kTiny;
    c = x + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::numbers::inv_sqrtpi * std::exp(-x * x) / f;
}

void MLParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InvalidArgument("Mittag-Leffler parameters must satisfy alpha > 0 and beta > 0 (got alpha=" +
                          format_number(alpha) + ", beta=" + format_number(beta) + ")");
  }
}

double mittag_leffler(const MLParams& params, double z, const SeriesBudget& budget) {
  params.validate();
  if (budget.max_terms == 0) throw InvalidArgument("mittag_leffler: max_terms must be >= 1");
  return evaluate_ml(params, z, budget, [&](std::size_t j) {
    return reciprocal_gamma(params.alpha * static_cast<double>(j) + params.beta);
  });
}

MittagLefflerSeries::MittagLefflerSeries(MLParams params, SeriesBudget budget)
    : params_(params), budget_(budget) {
  params_.validate();
  if (budget_.max_terms == 0) throw InvalidArgument("MittagLefflerSeries: max_terms must be >= 1");
  coefficients_.resize(budget_.max_terms);
  for (std::size_t j = 0; j < budget_.max_terms; ++j) {
    coefficients_[j] = reciprocal_gamma(params_.alpha * static_cast<double>(j) + params_.beta);
  }
}

double MittagLefflerSeries::operator()(double z) const {
  return evaluate_ml(params_, z, budget_, [this](std::size_t j) { return coefficients_[j]; });
}

}  // namespace fracvar
