#pragma once

#include <complex>
#include <vector>

#include "kdvb/solver.hpp"

namespace kdvb {

enum class SpectrumTarget {
  /// G = A^{-1} B, the zero-source step map.
  Amplification,
  /// The implicit matrix A itself.
  StepMatrix,
};

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  /// max_i ||G v_i - lambda_i v_i|| / ||v_i||
  double max_residual = 0.0;

  double spectral_radius() const;
};

/// Eigenvalues for constant alpha, beta. Hessenberg reduction + shifted QR.
/// Throws ErrorCode::Convergence when QR fails or the residual exceeds 1e-10.
SpectrumReport amplification_spectrum(int degree, double dt, double alpha, double beta,
                                      SpectrumTarget target = SpectrumTarget::Amplification);

inline constexpr double kEigenResidualTolerance = 1e-10;

/// ((3/8 - eps1/16) alpha - (eps2/8 + 9/8) beta) > 0
bool hypothesis_h_check(double alpha, double beta, double eps1, double eps2);

/// Weighted quantities of u_N = (1 - x) sum u_n phi_n, all by Gauss quadrature.
struct WeightedNorms {
  /// ||u||^2 with weight (1 - x)^{-1}
  double u_omega = 0.0;
  /// ||u||^2 with weight (1 - x)^{-3}
  double u_omega3 = 0.0;
  /// ||u'||^2 with weight (1 - x)^{-1}
  double du_omega = 0.0;
  /// unweighted ||u'||^2
  double du = 0.0;
  /// u(-1)
  double left_value = 0.0;
};

WeightedNorms weighted_norms(const LpgSolver& solver, const Vector& coeffs);

/// Both sides of the discrete energy inequality
///
///   ||u^n||_w^2 + dt sum (3 l alpha_k - 1) ||u'^{k+1/2}||^2 + dt sum alpha_k |u^{k+1/2}(-1)|^2
///     + dt sum beta_k (||u'^{k+1/2}||_w^2 - ||u^{k+1/2}||_{w3}^2)
///   <= 8 l ||u^0||_w^2 + 8 dt l^2 sum ||f^{k+1/2}||_{H^-1}^2,
///
/// w = (1 - x)^{-1}, evaluated for every n = 1..n_T. The H^-1 norm is replaced by
/// sup_{v in W_{N-1}} (f, v) / ||v'|| = sqrt(b^T L^{-1} b), which is only a lower
/// bound, so a negative margin is flagged rather than thrown.
struct StabilityCertificate {
  double ell = 1.0;
  std::vector<double> lhs;  // index n - 1
  std::vector<double> rhs;
  /// min_n (rhs - lhs)
  double margin = 0.0;
  bool flagged = false;
};

/// Throws ErrorCode::Hypothesis unless alpha(t_k) >= 1 / (3 l) and beta(t_k) >= 0 for all k,
/// and ErrorCode::Domain if l < 1.
StabilityCertificate stability_certificate(const SolverConfig& config, double ell);

}  // namespace kdvb
