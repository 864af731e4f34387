#include "kdvb/legendre.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "kdvb/error.hpp"

namespace kdvb {
namespace {

constexpr double kDomainSlack = 1e-14;

void check_point(double x) {
  if (!(std::abs(x) <= 1.0 + kDomainSlack)) {
    throw Error(ErrorCode::Domain,
                "Legendre evaluation point outside [-1,1]: " + std::to_string(x));
  }
}

void check_degree(int n) {
  if (n < 0) {
    throw Error(ErrorCode::Domain, "negative Legendre degree " + std::to_string(n));
  }
}

}  // namespace

void legendre_table(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = ((2.0 * kd + 1.0) * x * out[k] - kd * out[k - 1]) / (kd + 1.0);
  }
}

void legendre_derivative_table(double x, std::span<double> out) {
  if (out.empty()) return;
  std::vector<double> values(out.size());
  legendre_table(x, values);
  out[0] = 0.0;
  if (out.size() == 1) return;
  out[1] = 1.0;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = out[k - 1] + (2.0 * static_cast<double>(k) + 1.0) * values[k];
  }
}

double legendre(int n, double x) {
  check_degree(n);
  check_point(x);
  // Endpoint values are exact by definition; the recurrence only reproduces them to rounding.
  if (x == 1.0) return 1.0;
  if (x == -1.0) return (n % 2 == 0) ? 1.0 : -1.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double curr = x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

double legendre_derivative(int n, double x) {
  check_degree(n);
  check_point(x);
  if (n == 0) return 0.0;
  std::vector<double> values(static_cast<std::size_t>(n));
  legendre_table(x, values);
  double sum = 0.0;
  for (int k = (n % 2 == 0) ? 1 : 0; k < n; k += 2) {
    sum += (2.0 * k + 1.0) * values[static_cast<std::size_t>(k)];
  }
  return sum;
}

double legendre_second_derivative(int n, double x) {
  check_degree(n);
  check_point(x);
  if (n < 2) return 0.0;
  std::vector<double> derivs(static_cast<std::size_t>(n));
  legendre_derivative_table(x, derivs);
  double sum = 0.0;
  for (int k = (n % 2 == 0) ? 1 : 0; k < n; k += 2) {
    sum += (2.0 * k + 1.0) * derivs[static_cast<std::size_t>(k)];
  }
  return sum;
}

Basis::Basis(int degree) : degree_(degree) {
  if (degree < 3) {
    throw Error(ErrorCode::Domain,
                "basis degree N must be >= 3, got " + std::to_string(degree));
  }
}

void Basis::check_index(int n) const {
  if (n < 0 || n >= dim()) {
    throw Error(ErrorCode::Index, "mode index " + std::to_string(n) +
                                      " outside [0, " + std::to_string(dim() - 1) +
                                      "] for N=" + std::to_string(degree_));
  }
}

double Basis::phi(int n, double x) const {
  check_index(n);
  return legendre_c(n + 1) * (legendre(n, x) - legendre(n + 2, x));
}

double Basis::phi_derivative(int n, double x) const {
  check_index(n);
  return -legendre(n + 1, x);
}

double Basis::trial(int n, double x) const { return (1.0 - x) * phi(n, x); }

double Basis::trial_derivative(int n, double x, int order) const {
  check_index(n);
  // w = (1-x) phi,  phi' = -L_{n+1}
  // w'   = -phi - (1-x) L_{n+1}
  // w''  = 2 L_{n+1} - (1-x) L_{n+1}'
  // w''' = 3 L_{n+1}' - (1-x) L_{n+1}''
  switch (order) {
    case 0: return trial(n, x);
    case 1: return -phi(n, x) - (1.0 - x) * legendre(n + 1, x);
    case 2: return 2.0 * legendre(n + 1, x) - (1.0 - x) * legendre_derivative(n + 1, x);
    case 3:
      return 3.0 * legendre_derivative(n + 1, x) -
             (1.0 - x) * legendre_second_derivative(n + 1, x);
    default:
      throw Error(ErrorCode::Domain,
                  "trial derivative order must be in 0..3, got " + std::to_string(order));
  }
}

}  // namespace kdvb
