#pragma once

#include <numbers>

#include "kdvb/profiles.hpp"
#include "kdvb/solver.hpp"

namespace kdvb {

/// Exact solution u(x, t) = sin^2(a x) sin(b x + c t) of
///   u_t + alpha(t) u_xxx - beta(t) u_xx = f,   u(-1) = u(1) = u_x(1) = 0,
/// with the matching source f. Boundary conditions hold because a = pi.
struct ManufacturedProblem {
  double a = std::numbers::pi;
  double b = 12.0;
  double c = 12.0;

  double exact(double x, double t) const;
  double initial(double x) const { return exact(x, 0.0); }
  double source(double x, double t, double alpha, double beta) const;

  SpaceTimeFunction exact_function() const;
  SpaceTimeFunction source_function(const CoefficientPair& coefficients) const;

  /// Installs u0 and f (bound to base.coefficients) into a copy of base.
  SolverConfig configure(SolverConfig base) const;
};

}  // namespace kdvb
