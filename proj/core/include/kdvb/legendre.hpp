#pragma once

#include <span>

namespace kdvb {

/// L_n(x) by the upward Bonnet recurrence. Throws ErrorCode::Domain for |x| > 1 + 1e-14.
double legendre(int n, double x);

/// L_n'(x) from the expansion L_n' = sum_{k < n, k + n odd} (2k+1) L_k.
double legendre_derivative(int n, double x);

/// L_n''(x), applying the same expansion to each L_k'.
double legendre_second_derivative(int n, double x);

/// Fills out[0..out.size()) with L_0(x), L_1(x), ...
void legendre_table(double x, std::span<double> out);

/// Fills out[k] = L_k'(x) for k < out.size(), using the derivative recurrence
/// L_{k+1}' = L_{k-1}' + (2k+1) L_k.
void legendre_derivative_table(double x, std::span<double> out);

inline constexpr double legendre_c(int n) noexcept { return 1.0 / (2.0 * n + 1.0); }

/// Petrov-Galerkin basis of degree cap N.
///
/// Test functions  phi_n = c_{n+1} (L_n - L_{n+2}),  n = 0..N-3, span W_{N-1}.
/// Trial functions w_n = (1 - x) phi_n span V_N and satisfy
/// w(-1) = w(1) = w'(1) = 0.
class Basis {
 public:
  /// Throws ErrorCode::Domain when N < 3.
  explicit Basis(int degree);

  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return degree_ - 2; }

  double phi(int n, double x) const;
  /// phi_n' = -L_{n+1}.
  double phi_derivative(int n, double x) const;

  double trial(int n, double x) const;
  /// d^order/dx^order of (1 - x) phi_n, order in 0..3.
  double trial_derivative(int n, double x, int order) const;

 private:
  void check_index(int n) const;

  int degree_;
};

}  // namespace kdvb
