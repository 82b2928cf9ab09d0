#include "fracvar/lagrangian.hpp"

namespace fracvar {

Lagrangian::Lagrangian(Expr f)
    : f_(std::move(f)),
      dy_(differentiate(f_, Var::Y)),
      dv_(differentiate(f_, Var::V)),
      dyy_(differentiate(dy_, Var::Y)),
      dyv_(differentiate(dy_, Var::V)),
      dvv_(differentiate(dv_, Var::V)) {}

Lagrangian Lagrangian::parse(std::string_view source) { return Lagrangian(fracvar::parse(source)); }

PartialValues Lagrangian::first_order(double t, double y, double v) const {
  PartialValues p;
  p.value = evaluate(f_, t, y, v);
  p.dy = evaluate(dy_, t, y, v);
  p.dv = evaluate(dv_, t, y, v);
  return p;
}

PartialValues Lagrangian::all(double t, double y, double v) const {
  PartialValues p = first_order(t, y, v);
  p.dyy = evaluate(dyy_, t, y, v);
  p.dyv = evaluate(dyv_, t, y, v);
  p.dvv = evaluate(dvv_, t, y, v);
  return p;
}

}  // namespace fracvar
