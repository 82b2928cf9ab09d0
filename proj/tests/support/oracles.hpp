#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Adaptive Simpson quadrature in long double.
long double simpson(const std::function<long double(long double)>& f, long double a,
                    long double b, long double tol, int max_depth = 50);

/// (-1)^j binom(alpha, j) from gamma function ratios.
double binomial_weight(double alpha, int j);

/// Left Riemann-Liouville derivative of (t - a)^p at t.
double rl_power_left(double p, double alpha, double t, double a = 0.0);

/// E_{alpha,beta}(z) by a plain long-double series using std::tgamma.
long double ml_series(long double alpha, long double beta, long double z, int terms = 400);

/// Reference extremal via y = xi t E_{1-alpha,2}(-k t^{1-alpha}).
double reference_via_ml2(double k, double alpha, double xi, double t);

/// e^{x^2} erfc(x) in long double.
long double scaled_erfc(long double x);

/// Forward-mode dual number.
struct Dual {
  double v;
  double d;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
inline Dual exp(Dual a) { return {std::exp(a.v), a.d * std::exp(a.v)}; }
inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(Dual a) { return {std::sqrt(a.v), a.d / (2.0 * std::sqrt(a.v))}; }
inline Dual sin(Dual a) { return {std::sin(a.v), a.d * std::cos(a.v)}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -a.d * std::sin(a.v)}; }
inline Dual pow(Dual a, double p) { return {std::pow(a.v, p), a.d * p * std::pow(a.v, p - 1.0)}; }

/// Deterministic generator for property tests.
inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(20240611u + salt); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
