#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kdvb/error.hpp"
#include "kdvb/legendre.hpp"
#include "kdvb/quadrature.hpp"

using namespace kdvb;

TEST_CASE("low-order Gauss rules") {
  const auto one = gauss_legendre(1);
  REQUIRE(one.order() == 1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.weights[0] == 2.0);

  const auto two = gauss_legendre(2);
  CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("Gauss rule invariants") {
  for (int q : {3, 7, 16, 33, 64, 128}) {
    const auto rule = gauss_legendre(q);
    double total = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(std::abs(total - 2.0) < 1e-12);
    for (int i = 0; i < q; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      CHECK(std::abs(rule.nodes[ui]) < 1.0);
      if (i > 0) CHECK(rule.nodes[ui] > rule.nodes[ui - 1]);
      CHECK(std::abs(rule.nodes[ui] + rule.nodes[static_cast<std::size_t>(q - 1 - i)]) < 1e-12);
      CHECK(std::abs(legendre(q, rule.nodes[ui])) < 1e-12);
    }
  }
}

TEST_CASE("Gauss exactness to degree 2q-1") {
  // Monomials: int x^k = 2/(k+1) for even k, 0 for odd k.
  for (int q : {1, 2, 5, 16, 40}) {
    const auto rule = gauss_legendre(q);
    for (int k = 0; k <= 2 * q - 1; ++k) {
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      const double got = rule.integrate([k](double x) { return std::pow(x, k); });
      CHECK(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
  }
  const auto q16 = gauss_legendre(16);
  CHECK(std::abs(q16.integrate([](double x) { return std::pow(x, 30); }) - 2.0 / 31.0) < 1e-12);
}

TEST_CASE("CGL points") {
  CHECK(cgl_points(2) == std::vector<double>{-1.0, 0.0, 1.0});
  const auto four = cgl_points(4);
  CHECK(four[1] == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(four[3] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  const auto pts = cgl_points(32);
  REQUIRE(pts.size() == 33);
  CHECK(pts.front() == -1.0);
  CHECK(pts.back() == 1.0);
  for (std::size_t j = 1; j < pts.size(); ++j) CHECK(pts[j] > pts[j - 1]);
  for (std::size_t j = 0; j < pts.size(); ++j) CHECK(pts[j] == -pts[pts.size() - 1 - j]);
  CHECK_THROWS_AS(cgl_points(0), Error);
}

TEST_CASE("weighted inner products") {
  const auto rule = gauss_legendre(8);
  auto L = [](int n) { return [n](double x) { return legendre(n, x); }; };
  CHECK(weighted_inner_product(L(3), L(3), 0, 0, rule) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(std::abs(weighted_inner_product(L(2), L(5), 0, 0, rule)) < 1e-14);
  const auto one = [](double) { return 1.0; };
  CHECK(weighted_inner_product(one, one, 0, 0, gauss_legendre(1)) == doctest::Approx(2.0));
  CHECK(weighted_inner_product(one, one, 0, 0, gauss_legendre(9)) == doctest::Approx(2.0));
  // int (1-x)(1+x) dx = 4/3
  CHECK(weighted_inner_product(one, one, 1, 1, rule) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  const auto bad = [](double x) { return x > 0.5 ? std::nan("") : 1.0; };
  CHECK_THROWS_AS(weighted_inner_product(bad, one, 0, 0, rule), Error);
}

TEST_CASE("Legendre orthogonality by quadrature") {
  const auto rule = gauss_legendre(21);
  for (int j = 0; j <= 20; ++j) {
    for (int k = 0; k <= 20; ++k) {
      const double got = rule.integrate([j, k](double x) { return legendre(j, x) * legendre(k, x); });
      const double expected = j == k ? 2.0 / (2 * k + 1) : 0.0;
      CHECK(std::abs(got - expected) < 1e-12);
    }
  }
}
