#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kdvb/legendre.hpp"
#include "kdvb/operators.hpp"
#include "kdvb/profiles.hpp"
#include "kdvb/quadrature.hpp"

namespace kdvb {

using SpaceFunction = std::function<double(double x)>;
using SpaceTimeFunction = std::function<double(double x, double t)>;

struct SolverConfig {
  int degree = 32;
  double dt = 1e-4;
  double final_time = 2.0;
  CoefficientPair coefficients = CoefficientPair::constant(1.0, 0.0);
  /// Empty means f = 0.
  SpaceTimeFunction source;
  /// Empty means u0 = 0.
  SpaceFunction initial;
  double norm_exponent = 2.0;
  /// 0 selects default_quadrature_order(degree).
  int quadrature_order = 0;

  /// Throws ErrorCode::Config naming the offending field.
  void validate() const;
  /// n_T = T / dt; T must be an integer multiple of dt to 1e-9.
  int num_steps() const;
  int effective_quadrature_order() const;
};

/// Coefficients u_0..u_{N-3} of u_N = (1 - x) sum_n u_n phi_n at time index `step`.
struct ModalState {
  Vector coeffs;
  int step = 0;
};

struct Trajectory {
  double dt = 0.0;
  std::vector<ModalState> states;

  double time(std::size_t i) const { return dt * static_cast<double>(states[i].step); }
};

/// Oracle operators for degree N, built once per process and shared read-only.
std::shared_ptr<const OperatorSet> shared_operators(int degree);

/// Fully discrete Legendre-Petrov-Galerkin scheme
///   A U^{k+1} = B U^k + dt b^{k+1/2},   b_m = ((f^k + f^{k+1}) / 2, phi_m),
/// with alpha and beta sampled at t_k. Always assembled from the oracle matrices.
class LpgSolver {
 public:
  explicit LpgSolver(SolverConfig config);

  const SolverConfig& config() const noexcept { return config_; }
  const OperatorSet& operators() const noexcept { return *ops_; }
  const Basis& basis() const noexcept { return basis_; }
  const QuadratureRule& quadrature() const noexcept { return rule_; }
  int dim() const noexcept { return basis_.dim(); }

  /// b_m = (g, phi_m) by quadrature. Throws ErrorCode::NonFinite.
  Vector load_vector(const SpaceFunction& g) const;
  /// Galerkin projection: M u = (g, phi_m).
  Vector project(const SpaceFunction& g) const;
  ModalState project_initial() const;

  /// 1/2 [(f(., t0), phi_m) + (f(., t1), phi_m)].
  Vector source_load(double t0, double t1) const;
  /// Modal source F with M F = source_load(t0, t1).
  Vector source_modal(double t0, double t1) const;

  /// Advances one step. Refactorizes A only when alpha(t_k) or beta(t_k) moved by > 1e-15.
  ModalState step(const ModalState& state);

  /// Calls visit for k = 0..n_T in order.
  void run(const std::function<void(const ModalState&)>& visit);
  Trajectory run();

  /// u_N(x_j) for each point.
  Vector nodal_values(const ModalState& state, std::span<const double> points) const;
  /// Rows: points, columns: trial functions (1 - x) phi_n.
  Matrix trial_matrix(std::span<const double> points) const;

 private:
  const StepFactorization& factorization_for(double alpha, double beta);
  ModalState advance(const ModalState& state, const Vector& load);
  Vector source_at(double t) const;

  SolverConfig config_;
  Basis basis_;
  QuadratureRule rule_;
  std::shared_ptr<const OperatorSet> ops_;
  // phi_n at quadrature nodes, pre-multiplied by weights: (dim x q).
  Matrix weighted_phi_;
  Eigen::LLT<Matrix> mass_;

  bool have_factorization_ = false;
  double cached_alpha_ = 0.0;
  double cached_beta_ = 0.0;
  StepMatrices cached_step_;
  StepFactorization cached_lu_;
};

}  // namespace kdvb
