#include "fracvar/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fracvar/error.hpp"

namespace fracvar {
namespace {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are
// the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  int depth;
  QuadratureResult r;
};

bool smaller_error(const Panel& x, const Panel& y) {
  return x.r.error_estimate < y.r.error_estimate;
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), 15};
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_depth) {
  QuadratureResult total;
  if (a == b) return total;
  std::vector<Panel> heap;
  heap.push_back({a, b, 0, integrate_gk15(f, a, b)});
  total.evaluations = heap.front().r.evaluations;
  double error = heap.front().r.error_estimate;
  double magnitude = std::abs(heap.front().r.value);
  constexpr double kRounding = 50.0 * std::numeric_limits<double>::epsilon();
  while (error > std::max(abs_tol, kRounding * magnitude)) {
    std::pop_heap(heap.begin(), heap.end(), smaller_error);
    const Panel worst = heap.back();
    heap.pop_back();
    if (worst.depth >= max_depth) {
      throw NonConvergenceError("integrate_adaptive: subdivision limit reached on [" +
                                std::to_string(worst.a) + ", " + std::to_string(worst.b) + "]");
    }
    const double mid = 0.5 * (worst.a + worst.b);
    error -= worst.r.error_estimate;
    magnitude -= std::abs(worst.r.value);
    for (const auto& [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      Panel child{lo, hi, worst.depth + 1, integrate_gk15(f, lo, hi)};
      total.evaluations += child.r.evaluations;
      error += child.r.error_estimate;
      magnitude += std::abs(child.r.value);
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end(), smaller_error);
    }
  }
  // Sum left to right so the result does not depend on heap order.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& panel : heap) {
    total.value += panel.r.value;
    total.error_estimate += panel.r.error_estimate;
  }
  return total;
}

}  // namespace fracvar
