#include "kdvb/manufactured.hpp"

#include <cmath>

namespace kdvb {

double ManufacturedProblem::exact(double x, double t) const {
  const double s = std::sin(a * x);
  return s * s * std::sin(b * x + c * t);
}

double ManufacturedProblem::source(double x, double t, double alpha, double beta) const {
  const double sa = std::sin(a * x);
  const double sa2 = sa * sa;
  const double c2a = std::cos(2.0 * a * x);
  const double s2a = std::sin(2.0 * a * x);
  const double phase = b * x + c * t;
  const double sp = std::sin(phase);
  const double cp = std::cos(phase);
  return ((c - b * b * b * alpha) * sa2 + 6.0 * a * a * b * alpha * c2a) * cp -
         a * alpha * (4.0 * a * a + 3.0 * b * b) * s2a * sp +
         beta * (-(2.0 * a * a * c2a - b * b * sa2) * sp - 2.0 * a * b * s2a * cp);
}

SpaceTimeFunction ManufacturedProblem::exact_function() const {
  return [problem = *this](double x, double t) { return problem.exact(x, t); };
}

SpaceTimeFunction ManufacturedProblem::source_function(const CoefficientPair& coefficients) const {
  return [problem = *this, coefficients](double x, double t) {
    return problem.source(x, t, coefficients.alpha(t), coefficients.beta(t));
  };
}

SolverConfig ManufacturedProblem::configure(SolverConfig base) const {
  base.initial = [problem = *this](double x) { return problem.initial(x); };
  base.source = source_function(base.coefficients);
  return base;
}

}  // namespace kdvb
