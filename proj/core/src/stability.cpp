#include "kdvb/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kdvb/error.hpp"

namespace kdvb {

double SpectrumReport::spectral_radius() const {
  double r = 0.0;
  for (const auto& lambda : eigenvalues) r = std::max(r, std::abs(lambda));
  return r;
}

SpectrumReport amplification_spectrum(int degree, double dt, double alpha, double beta,
                                      SpectrumTarget target) {
  const auto ops = shared_operators(degree);
  const StepMatrices step = build_step_matrices(*ops, dt, alpha, beta);
  Matrix g;
  if (target == SpectrumTarget::Amplification) {
    const StepFactorization lu(step, degree);
    g.resize(step.B.rows(), step.B.cols());
    for (Eigen::Index j = 0; j < step.B.cols(); ++j) g.col(j) = lu.solve(step.B.col(j));
  } else {
    g = step.A;
  }

  Eigen::EigenSolver<Matrix> solver(g, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "QR iteration did not converge (N=" << degree << ", dt=" << dt << ", alpha=" << alpha
        << ", beta=" << beta << ")";
    throw Error(ErrorCode::Convergence, msg.str());
  }
  SpectrumReport report;
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  const Eigen::MatrixXcd gc = g.cast<std::complex<double>>();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Eigen::VectorXcd v = vectors.col(i);
    const double residual = (gc * v - values[i] * v).norm() / v.norm();
    report.max_residual = std::max(report.max_residual, residual);
    report.eigenvalues.push_back(values[i]);
  }
  // Deterministic order: by real part, then imaginary part.
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const auto& a, const auto& b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
  if (!(report.max_residual <= kEigenResidualTolerance)) {
    std::ostringstream msg;
    msg << "eigenpair residual " << report.max_residual << " exceeds " << kEigenResidualTolerance;
    throw Error(ErrorCode::Convergence, msg.str());
  }
  return report;
}

bool hypothesis_h_check(double alpha, double beta, double eps1, double eps2) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) {
    throw Error(ErrorCode::Domain, "Hypothesis H needs eps1, eps2 > 0");
  }
  return (3.0 / 8.0 - eps1 / 16.0) * alpha - (eps2 / 8.0 + 9.0 / 8.0) * beta > 0.0;
}

WeightedNorms weighted_norms(const LpgSolver& solver, const Vector& coeffs) {
  const QuadratureRule& rule = solver.quadrature();
  const int d = solver.dim();
  const int degree = solver.basis().degree();
  std::vector<double> leg(static_cast<std::size_t>(degree) + 1);
  WeightedNorms out;
  for (int i = 0; i < rule.order(); ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    const double w = rule.weights[static_cast<std::size_t>(i)];
    legendre_table(x, leg);
    // s = sum u_n phi_n, s' = -sum u_n L_{n+1}; u = (1-x) s, u' = -s + (1-x) s'.
    double s = 0.0;
    double ds = 0.0;
    for (int n = 0; n < d; ++n) {
      const auto un = static_cast<std::size_t>(n);
      s += coeffs[n] * legendre_c(n + 1) * (leg[un] - leg[un + 2]);
      ds -= coeffs[n] * leg[un + 1];
    }
    const double one_minus = 1.0 - x;
    const double u = one_minus * s;
    const double du = -s + one_minus * ds;
    out.u_omega += w * u * u / one_minus;
    out.u_omega3 += w * s * s / one_minus;
    out.du_omega += w * du * du / one_minus;
    out.du += w * du * du;
  }
  const double minus_one = -1.0;
  out.left_value = solver.nodal_values(ModalState{coeffs, 0}, std::span(&minus_one, 1))[0];
  return out;
}

StabilityCertificate stability_certificate(const SolverConfig& config, double ell) {
  if (!(ell >= 1.0)) throw Error(ErrorCode::Domain, "certificate needs l >= 1");
  const int steps = config.num_steps();
  const double alpha_min = 1.0 / (3.0 * ell);
  for (int k = 0; k < steps; ++k) {
    const double t = config.dt * k;
    const double alpha = config.coefficients.alpha(t);
    const double beta = config.coefficients.beta(t);
    if (alpha < alpha_min || beta < 0.0) {
      std::ostringstream msg;
      msg << "stability hypothesis violated at t=" << t << ": alpha=" << alpha
          << " (needs >= " << alpha_min << "), beta=" << beta << " (needs >= 0)";
      throw Error(ErrorCode::Hypothesis, msg.str());
    }
  }

  LpgSolver solver(config);
  const Eigen::LLT<Matrix> gram(solver.operators().L);  // (phi_m', phi_n') = l_mn

  StabilityCertificate cert;
  cert.ell = ell;
  ModalState state = solver.project_initial();
  const double initial = weighted_norms(solver, state.coeffs).u_omega;
  double lhs_sum = 0.0;
  double rhs_sum = 0.0;
  cert.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    const double t = config.dt * k;
    const double alpha = config.coefficients.alpha(t);
    const double beta = config.coefficients.beta(t);
    const Vector load = solver.source_load(t, t + config.dt);
    ModalState next = solver.step(state);
    const WeightedNorms mid = weighted_norms(solver, 0.5 * (state.coeffs + next.coeffs));
    lhs_sum += config.dt * ((3.0 * ell * alpha - 1.0) * mid.du +
                            alpha * mid.left_value * mid.left_value +
                            beta * (mid.du_omega - mid.u_omega3));
    const double dual_sq = load.dot(gram.solve(load));
    rhs_sum += 8.0 * config.dt * ell * ell * dual_sq;

    const double lhs = weighted_norms(solver, next.coeffs).u_omega + lhs_sum;
    const double rhs = 8.0 * ell * initial + rhs_sum;
    cert.lhs.push_back(lhs);
    cert.rhs.push_back(rhs);
    cert.margin = std::min(cert.margin, rhs - lhs);
    state = std::move(next);
  }
  if (steps == 0) cert.margin = 0.0;
  cert.flagged = cert.margin < 0.0;
  return cert;
}

}  // namespace kdvb
