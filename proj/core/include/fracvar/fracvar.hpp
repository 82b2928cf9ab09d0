#pragma once

#include "fracvar/error.hpp"
#include "fracvar/expr.hpp"
#include "fracvar/fracgrid.hpp"
#include "fracvar/lagrangian.hpp"
#include "fracvar/quadrature.hpp"
#include "fracvar/reference.hpp"
#include "fracvar/solver.hpp"
#include "fracvar/special.hpp"
#include "fracvar/variational.hpp"
