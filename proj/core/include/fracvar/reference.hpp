#pragma once

#include "fracvar/fracgrid.hpp"

namespace fracvar {

/// Data of the family  y' + k D^alpha y = xi  on [0, b], whose solution is
/// y(t) = xi int_0^t E_{1-alpha,1}(-k s^{1-alpha}) ds.
struct ReferenceSpec {
  double k;
  FracOrder order;
  double xi;
  Grid grid;

  /// Throws InvalidArgument unless grid.a() == 0 and k, xi are finite.
  void validate() const;
};

/// The extremal at every node, by cumulative adaptive Gauss-Kronrod
/// quadrature of the Mittag-Leffler kernel, panel by panel. The result is
/// xi times the xi = 1 solution, so it is exactly linear in xi.
SampledFunction ml_convolution_extremal(const ReferenceSpec& spec);

/// The extremal at a single point t in [0, b], integrated in one piece.
double reference_value(double k, const FracOrder& order, double xi, double t);

/// reference_value at t = b.
double boundary_value(const ReferenceSpec& spec);

/// Closed form for k = 1, alpha = 1/2:
///   xi (e^t erfc(sqrt t) - 1 + 2 sqrt(t / pi)).
/// Throws InvalidArgument for t < 0.
double closed_form_alpha_half(double t, double xi);

}  // namespace fracvar
