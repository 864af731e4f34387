#include "kdvb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kdvb/error.hpp"

namespace kdvb {
namespace {

constexpr double kNewtonTolerance = 1e-14;
constexpr int kNewtonMaxIterations = 100;

// L_q(x) and L_q'(x) together; x strictly interior.
std::pair<double, double> legendre_with_derivative(int q, double x) {
  double prev = 1.0;
  double curr = x;
  for (int k = 1; k < q; ++k) {
    const double next = ((2.0 * k + 1.0) * x * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  const double deriv = q * (x * curr - prev) / (x * x - 1.0);
  return {curr, deriv};
}

}  // namespace

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) {
    throw Error(ErrorCode::Domain, "quadrature order must be >= 1, got " + std::to_string(order));
  }
  const auto q = static_cast<std::size_t>(order);
  QuadratureRule rule;
  rule.nodes.assign(q, 0.0);
  rule.weights.assign(q, 0.0);
  if (order == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }

  // Solve for the positive half and mirror, so symmetry holds exactly.
  const std::size_t half = q / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // i-th largest root; Chebyshev guess cos(pi (i + 3/4) / (q + 1/2)).
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(q) + 0.5));
    bool converged = false;
    double deriv = 0.0;
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
      auto [value, d] = legendre_with_derivative(order, x);
      deriv = d;
      double delta = value / d;
      double next = x - delta;
      // Damping: never step out of (0, 1).
      while (next <= 0.0 || next >= 1.0) {
        delta *= 0.5;
        next = x - delta;
      }
      x = next;
      if (std::abs(delta) <= kNewtonTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw Error(ErrorCode::Convergence, "Gauss-Legendre Newton iteration failed at node " +
                                              std::to_string(i) + " of order " +
                                              std::to_string(order));
    }
    deriv = legendre_with_derivative(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
    rule.nodes[q - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[q - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (q % 2 == 1) {
    const auto [value, d] = legendre_with_derivative(order, 0.0);
    (void)value;
    rule.nodes[half] = 0.0;
    rule.weights[half] = 2.0 / (d * d);
  }
  return rule;
}

int default_quadrature_order(int degree) noexcept { return std::max(2 * degree, 64); }

std::vector<double> cgl_points(int n) {
  if (n < 1) {
    throw Error(ErrorCode::Domain, "CGL point count needs N >= 1, got " + std::to_string(n));
  }
  std::vector<double> pts(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    pts[static_cast<std::size_t>(j)] = -std::cos(std::numbers::pi * j / n);
  }
  pts.front() = -1.0;
  pts.back() = 1.0;
  // Exact antisymmetry, including the midpoint for even N.
  for (int j = 0; j <= n / 2; ++j) {
    const auto lo = static_cast<std::size_t>(j);
    const auto hi = static_cast<std::size_t>(n - j);
    if (lo == hi) {
      pts[lo] = 0.0;
    } else {
      pts[hi] = -pts[lo];
    }
  }
  return pts;
}

double weighted_inner_product(const std::function<double(double)>& f,
                              const std::function<double(double)>& g, double a, double b,
                              const QuadratureRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double value = std::pow(1.0 - x, a) * std::pow(1.0 + x, b) * f(x) * g(x);
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFinite,
                  "non-finite integrand at quadrature node " + std::to_string(i) +
                      " (x=" + std::to_string(x) + ")");
    }
    sum += rule.weights[i] * value;
  }
  return sum;
}

}  // namespace kdvb
