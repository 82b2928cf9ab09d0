#pragma once

#include <string_view>

#include "fracvar/expr.hpp"

namespace fracvar {

/// Pointwise values of an integrand and its partials at one (t, y, v).
struct PartialValues {
  double value = 0.0;
  double dy = 0.0;
  double dv = 0.0;
  double dyy = 0.0;
  double dyv = 0.0;
  double dvv = 0.0;
};

/// An integrand F(t, y, v) together with its exact first and second
/// partial derivatives in y and v.
class Lagrangian {
 public:
  explicit Lagrangian(Expr f);

  static Lagrangian parse(std::string_view source);

  const Expr& f() const noexcept { return f_; }
  const Expr& d2() const noexcept { return dy_; }   // dF/dy
  const Expr& d3() const noexcept { return dv_; }   // dF/dv
  const Expr& d22() const noexcept { return dyy_; }
  const Expr& d23() const noexcept { return dyv_; }
  const Expr& d33() const noexcept { return dvv_; }

  double value(double t, double y, double v) const { return evaluate(f_, t, y, v); }

  /// Value and first partials only (second partials left at zero).
  PartialValues first_order(double t, double y, double v) const;
  PartialValues all(double t, double y, double v) const;

  /// Canonical text of the simplified integrand.
  std::string canonical_text() const { return to_string(simplify(f_)); }

 private:
  Expr f_;
  Expr dy_;
  Expr dv_;
  Expr dyy_;
  Expr dyv_;
  Expr dvv_;
};

}  // namespace fracvar
