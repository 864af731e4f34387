#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kdvb/solver.hpp"

namespace kdvb {

struct ErrorReport {
  double eps = 0.0;
  double p = 2.0;
  int degree = 0;
  double dt = 0.0;
  double final_time = 0.0;
  std::string alpha;
  std::string beta;

  /// 20 log10(eps); -inf when eps == 0.
  double decibels() const;
};

/// Streams
///   eps = (dt / N) sum_{k=0}^{n_T} ( sum_{j=0}^{N} |u(x_j, t_k) - u_N^k(x_j)|^p )^{1/p}
/// over the N+1 Chebyshev-Gauss-Lobatto points, for several exponents p at once.
class EpsilonAccumulator {
 public:
  EpsilonAccumulator(const LpgSolver& solver, SpaceTimeFunction exact,
                     std::vector<double> exponents);

  void add(const ModalState& state);
  double value(std::size_t which = 0) const;
  const std::vector<double>& exponents() const noexcept { return exponents_; }

 private:
  double dt_;
  int degree_;
  SpaceTimeFunction exact_;
  std::vector<double> exponents_;
  std::vector<double> points_;
  Matrix trial_at_points_;
  std::vector<double> sums_;
};

ErrorReport epsilon_error(const Trajectory& trajectory, const SpaceTimeFunction& exact,
                          const SolverConfig& config);

/// Runs the configured problem and measures eps against `exact` for each exponent.
std::vector<double> run_and_measure(const SolverConfig& config, const SpaceTimeFunction& exact,
                                    const std::vector<double>& exponents);

/// 20 log10(eps). Throws ErrorCode::Domain for eps <= 0.
double to_decibels(double eps);

struct PowerLawFit {
  double order = 0.0;
  /// log(eps) = intercept + order log(h)
  double intercept = 0.0;

  double predict(double h) const;
};

/// Least-squares line through (log h, log eps). Needs >= 2 positive pairs and
/// at least two distinct h; throws ErrorCode::Domain otherwise.
PowerLawFit fit_order(std::span<const std::pair<double, double>> pairs);

}  // namespace kdvb
