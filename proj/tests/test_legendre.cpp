#include <doctest.h>

#include <cmath>
#include <random>

#include "kdvb/error.hpp"
#include "kdvb/legendre.hpp"
#include "kdvb/quadrature.hpp"

using namespace kdvb;

TEST_CASE("legendre values") {
  CHECK(legendre(0, 0.37) == 1.0);
  CHECK(legendre(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  CHECK(legendre(7, 1.0) == 1.0);
  for (int n = 0; n <= 60; ++n) {
    CHECK(legendre(n, 1.0) == 1.0);
    CHECK(legendre(n, -1.0) == (n % 2 == 0 ? 1.0 : -1.0));
  }
  // L_5 = (63x^5 - 70x^3 + 15x) / 8
  const double x = -0.3141;
  const double l5 = (63 * std::pow(x, 5) - 70 * std::pow(x, 3) + 15 * x) / 8;
  CHECK(legendre(5, x) == doctest::Approx(l5).epsilon(1e-14));
}

TEST_CASE("legendre domain errors") {
  CHECK_THROWS_AS(legendre(3, 1.0 + 1e-10), Error);
  CHECK_THROWS_AS(legendre_derivative(3, -1.5), Error);
  CHECK_NOTHROW(legendre(3, 1.0 + 5e-15));
  try {
    legendre(2, 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("legendre derivative") {
  CHECK(legendre_derivative(1, 0.3) == 1.0);
  CHECK(legendre_derivative(2, 0.25) == doctest::Approx(0.75));
  // Endpoint: L_n'(1) = n(n+1)/2
  for (int n = 0; n <= 20; ++n) {
    CHECK(legendre_derivative(n, 1.0) == doctest::Approx(n * (n + 1) / 2.0));
  }

  const double h = 1e-5;
  auto central = [h](int n, double x) {
    return (legendre(n, x + h) - legendre(n, x - h)) / (2 * h);
  };
  CHECK(std::abs(legendre_derivative(6, 0.9) - central(6, 0.9)) < 1e-6);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-0.99, 0.99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = trial % 15;
    const double x = dist(rng);
    CHECK(std::abs(legendre_derivative(n, x) - central(n, x)) < 1e-6);
    const double second_fd =
        (legendre_derivative(n, x + h) - legendre_derivative(n, x - h)) / (2 * h);
    CHECK(std::abs(legendre_second_derivative(n, x) - second_fd) < 1e-4);
  }
}

TEST_CASE("legendre tables agree with scalar evaluation") {
  std::vector<double> values(12);
  std::vector<double> derivs(12);
  legendre_table(0.42, values);
  legendre_derivative_table(0.42, derivs);
  for (int n = 0; n < 12; ++n) {
    CHECK(values[static_cast<std::size_t>(n)] == doctest::Approx(legendre(n, 0.42)).epsilon(1e-14));
    CHECK(derivs[static_cast<std::size_t>(n)] ==
          doctest::Approx(legendre_derivative(n, 0.42)).epsilon(1e-13));
  }
}

TEST_CASE("basis test functions") {
  const Basis basis(12);
  CHECK(basis.dim() == 10);
  for (int n = 0; n < basis.dim(); ++n) {
    CHECK(basis.phi(n, 1.0) == 0.0);
    CHECK(basis.phi(n, -1.0) == 0.0);
  }
  CHECK(basis.phi(0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(basis.phi(10, 0.0), Error);
  CHECK_THROWS_AS(basis.phi(-1, 0.0), Error);
  CHECK_THROWS_AS(Basis(2), Error);
  CHECK(Basis(3).dim() == 1);
}

TEST_CASE("phi derivative identity") {
  const Basis basis(40);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n = 0; n < basis.dim(); ++n) {
    for (int s = 0; s < 100; ++s) {
      const double x = dist(rng);
      const double composed =
          legendre_c(n + 1) * (legendre_derivative(n, x) - legendre_derivative(n + 2, x));
      CHECK(std::abs(composed + legendre(n + 1, x)) < 1e-10);
    }
  }
}

TEST_CASE("trial functions satisfy the boundary conditions") {
  const Basis basis(30);
  for (int n = 0; n < basis.dim(); ++n) {
    CHECK(basis.trial(n, -1.0) == 0.0);
    CHECK(basis.trial(n, 1.0) == 0.0);
    CHECK(std::abs(basis.trial_derivative(n, 1.0, 1)) < 1e-12);
  }
}

TEST_CASE("trial derivatives match finite differences") {
  const Basis basis(10);
  const double h = 1e-4;
  for (int n = 0; n < basis.dim(); ++n) {
    for (double x : {-0.7, 0.1, 0.55}) {
      for (int order = 1; order <= 3; ++order) {
        const double fd = (basis.trial_derivative(n, x + h, order - 1) -
                           basis.trial_derivative(n, x - h, order - 1)) /
                          (2 * h);
        CHECK(basis.trial_derivative(n, x, order) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  CHECK_THROWS_AS(basis.trial_derivative(0, 0.0, 4), Error);
}

TEST_CASE("Poincare-type inequality on random V_N elements") {
  const int degree = 24;
  const Basis basis(degree);
  const QuadratureRule rule = gauss_legendre(2 * degree + 8);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> coeff(0.0, 1.0);
  for (int sample = 0; sample < 100; ++sample) {
    std::vector<double> u(static_cast<std::size_t>(basis.dim()));
    for (std::size_t n = 0; n < u.size(); ++n) u[n] = coeff(rng) / (1.0 + static_cast<double>(n));
    double lhs = 0.0;
    double rhs = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
      const double x = rule.nodes[static_cast<std::size_t>(i)];
      double s = 0.0;
      double du = 0.0;
      for (int n = 0; n < basis.dim(); ++n) {
        s += u[static_cast<std::size_t>(n)] * basis.phi(n, x);
        du += u[static_cast<std::size_t>(n)] * basis.trial_derivative(n, x, 1);
      }
      // u^2 / (1-x)^3 = s^2 / (1-x) with u = (1-x) s
      lhs += rule.weights[static_cast<std::size_t>(i)] * s * s / (1.0 - x);
      rhs += rule.weights[static_cast<std::size_t>(i)] * du * du / (1.0 - x);
    }
    CHECK(lhs <= rhs * (1.0 + 1e-8));
  }
}
