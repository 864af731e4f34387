#pragma once

#include <functional>
#include <vector>

namespace kdvb {

/// Gauss-Legendre rule on (-1, 1). Nodes ascending, weights positive.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const noexcept { return static_cast<int>(nodes.size()); }

  /// sum_i w_i f(x_i)
  double integrate(const std::function<double(double)>& f) const;
};

/// Roots of L_q by damped Newton from Chebyshev guesses, tolerance 1e-14,
/// at most 100 iterations per node. Throws ErrorCode::Convergence naming the node.
QuadratureRule gauss_legendre(int order);

/// Default rule for a basis of degree N: order max(2N, 64).
int default_quadrature_order(int degree) noexcept;

/// Chebyshev-Gauss-Lobatto points x_j = -cos(pi j / N), j = 0..N, endpoints exactly +-1.
std::vector<double> cgl_points(int n);

/// sum_i w_i (1-x_i)^a (1+x_i)^b f(x_i) g(x_i).
///
/// Negative exponents are allowed; integrability is the caller's business
/// (e.g. a = -3 needs f g to vanish to third order at x = 1). Throws
/// ErrorCode::NonFinite if the weighted integrand is not finite at a node.
double weighted_inner_product(const std::function<double(double)>& f,
                              const std::function<double(double)>& g, double a, double b,
                              const QuadratureRule& rule);

}  // namespace kdvb
