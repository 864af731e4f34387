#include <doctest.h>

#include <cmath>
#include <random>

#include "kdvb/error.hpp"
#include "kdvb/stability.hpp"

using namespace kdvb;

TEST_CASE("amplification spectrum") {
  SUBCASE("identity map without dispersion or dissipation") {
    const auto report = amplification_spectrum(12, 0.5, 0.0, 0.0);
    REQUIRE(report.eigenvalues.size() == 10);
    for (const auto& lambda : report.eigenvalues) CHECK(std::abs(lambda - 1.0) < 1e-12);
  }
  SUBCASE("large-step configurations stay inside the unit disc") {
    for (double alpha : {0.1, 0.5, 1.0}) {
      for (double beta : {0.0, 0.1, 0.3}) {
        CAPTURE(alpha);
        CAPTURE(beta);
        const auto report = amplification_spectrum(42, 1.0, alpha, beta);
        CHECK(report.eigenvalues.size() == 40);
        CHECK(report.spectral_radius() <= 1.0 + 1e-8);
        CHECK(report.max_residual <= kEigenResidualTolerance);
      }
    }
  }
  SUBCASE("spectrum of A itself") {
    const auto report = amplification_spectrum(10, 1.0, 1.0, 0.3, SpectrumTarget::StepMatrix);
    CHECK(report.eigenvalues.size() == 8);
    CHECK(report.spectral_radius() > 0.0);
  }
  SUBCASE("deterministic ordering") {
    const auto a = amplification_spectrum(20, 0.1, 1.0, 0.1);
    const auto b = amplification_spectrum(20, 0.1, 1.0, 0.1);
    CHECK(a.eigenvalues == b.eigenvalues);
    for (std::size_t i = 1; i < a.eigenvalues.size(); ++i) {
      CHECK(a.eigenvalues[i - 1].real() <= a.eigenvalues[i].real());
    }
  }
}

TEST_CASE("hypothesis H") {
  CHECK(hypothesis_h_check(1.0, 0.0, 1e-6, 1e-6));
  CHECK(hypothesis_h_check(1.0, 0.0, 1e-2, 1e-2));
  CHECK_FALSE(hypothesis_h_check(1.0, 0.4, 1e-6, 1e-6));
  // (3/8 - 0.1/16) - (0.1/8 + 9/8) * 0.1 = 0.36875 - 0.11375
  CHECK(hypothesis_h_check(1.0, 0.1, 0.1, 0.1));
  CHECK_THROWS_AS(hypothesis_h_check(1.0, 0.1, 0.0, 0.1), Error);
}

namespace {

SolverConfig certificate_config(double alpha, double beta, int steps) {
  SolverConfig cfg;
  cfg.degree = 16;
  cfg.dt = 1e-2;
  cfg.final_time = 1e-2 * steps;
  cfg.coefficients = CoefficientPair::constant(alpha, beta);
  return cfg;
}

SpaceFunction random_member(int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  const Basis basis(degree);
  std::vector<double> u(static_cast<std::size_t>(basis.dim()));
  for (auto& c : u) c = d(rng);
  return [basis, u](double x) {
    double s = 0.0;
    for (int n = 0; n < basis.dim(); ++n) s += u[static_cast<std::size_t>(n)] * basis.trial(n, x);
    return s;
  };
}

}  // namespace

TEST_CASE("weighted norms") {
  SolverConfig cfg = certificate_config(1.0, 0.0, 1);
  const LpgSolver solver(cfg);
  Vector u = Vector::Zero(solver.dim());
  u[0] = 1.0;
  // u = (1 - x) phi_0 = (1 - x)(1 - x^2) / 2
  const auto norms = weighted_norms(solver, u);
  const double expected = solver.quadrature().integrate([](double x) {
    const double v = (1 - x) * (1 - x * x) / 2;
    return v * v / (1 - x);
  });
  CHECK(norms.u_omega == doctest::Approx(expected).epsilon(1e-13));
  CHECK(norms.left_value == doctest::Approx(0.0).epsilon(1e-14));
  const double du = solver.quadrature().integrate([](double x) {
    const double d = (3 * x * x - 2 * x - 1) / 2;
    return d * d;
  });
  CHECK(norms.du == doctest::Approx(du).epsilon(1e-13));
}

TEST_CASE("stability certificate") {
  SUBCASE("zero source, random data") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SolverConfig cfg = certificate_config(1.0, 0.2, 50);
      cfg.initial = random_member(cfg.degree, seed);
      const auto cert = stability_certificate(cfg, 1.0);
      REQUIRE(cert.lhs.size() == 50);
      CHECK_FALSE(cert.flagged);
      CHECK(cert.margin >= 0.0);
    }
  }
  SUBCASE("hypothesis boundary is accepted") {
    SolverConfig cfg = certificate_config(1.0 / 3.0, 0.0, 10);
    cfg.initial = random_member(cfg.degree, 9);
    CHECK_NOTHROW(stability_certificate(cfg, 1.0));
  }
  SUBCASE("violated hypothesis") {
    SolverConfig cfg = certificate_config(0.05, 0.0, 10);
    try {
      stability_certificate(cfg, 1.0);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Hypothesis);
    }
    cfg = certificate_config(1.0, -0.1, 10);
    CHECK_THROWS_AS(stability_certificate(cfg, 1.0), Error);
    CHECK_THROWS_AS(stability_certificate(certificate_config(1.0, 0.0, 10), 0.5), Error);
  }
}

TEST_CASE("weighted-norm bound under zero source") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> alpha_dist(1.0 / 3.0, 2.0);
  std::uniform_real_distribution<double> beta_dist(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    SolverConfig cfg = certificate_config(alpha_dist(rng), beta_dist(rng), 100);
    cfg.initial = random_member(cfg.degree, 100 + static_cast<std::uint64_t>(trial));
    LpgSolver solver(cfg);
    const double bound = 8.0 * weighted_norms(solver, solver.project_initial().coeffs).u_omega;
    solver.run([&](const ModalState& s) {
      CHECK(weighted_norms(solver, s.coeffs).u_omega <= bound);
    });
  }
}
