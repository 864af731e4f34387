#include "kdvb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kdvb/error.hpp"
#include "kdvb/quadrature.hpp"

namespace kdvb {

double ErrorReport::decibels() const {
  if (eps == 0.0) return -std::numeric_limits<double>::infinity();
  return to_decibels(eps);
}

EpsilonAccumulator::EpsilonAccumulator(const LpgSolver& solver, SpaceTimeFunction exact,
                                       std::vector<double> exponents)
    : dt_(solver.config().dt),
      degree_(solver.basis().degree()),
      exact_(std::move(exact)),
      exponents_(std::move(exponents)),
      points_(cgl_points(degree_)),
      trial_at_points_(solver.trial_matrix(points_)),
      sums_(exponents_.size(), 0.0) {
  for (double p : exponents_) {
    if (!(p >= 1.0)) throw Error(ErrorCode::Domain, "error norm exponent must be >= 1");
  }
}

void EpsilonAccumulator::add(const ModalState& state) {
  const double t = dt_ * state.step;
  const Vector numeric = trial_at_points_ * state.coeffs;
  std::vector<double> diffs(points_.size());
  for (std::size_t j = 0; j < points_.size(); ++j) {
    diffs[j] = std::abs(exact_(points_[j], t) - numeric[static_cast<Eigen::Index>(j)]);
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const double p = exponents_[i];
    double inner = 0.0;
    if (p == 1.0) {
      for (double d : diffs) inner += d;
    } else if (p == 2.0) {
      for (double d : diffs) inner += d * d;
      inner = std::sqrt(inner);
    } else {
      for (double d : diffs) inner += std::pow(d, p);
      inner = std::pow(inner, 1.0 / p);
    }
    sums_[i] += inner;
  }
}

double EpsilonAccumulator::value(std::size_t which) const {
  return dt_ / degree_ * sums_.at(which);
}

ErrorReport epsilon_error(const Trajectory& trajectory, const SpaceTimeFunction& exact,
                          const SolverConfig& config) {
  const LpgSolver solver(config);
  EpsilonAccumulator acc(solver, exact, {config.norm_exponent});
  for (const auto& state : trajectory.states) acc.add(state);
  return ErrorReport{acc.value(),
                     config.norm_exponent,
                     config.degree,
                     config.dt,
                     config.final_time,
                     config.coefficients.alpha.describe(),
                     config.coefficients.beta.describe()};
}

std::vector<double> run_and_measure(const SolverConfig& config, const SpaceTimeFunction& exact,
                                    const std::vector<double>& exponents) {
  LpgSolver solver(config);
  EpsilonAccumulator acc(solver, exact, exponents);
  solver.run([&acc](const ModalState& s) { acc.add(s); });
  std::vector<double> out;
  for (std::size_t i = 0; i < exponents.size(); ++i) out.push_back(acc.value(i));
  return out;
}

double to_decibels(double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::Domain, "decibels need eps > 0");
  return 20.0 * std::log10(eps);
}

double PowerLawFit::predict(double h) const { return std::exp(intercept + order * std::log(h)); }

PowerLawFit fit_order(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 2) throw Error(ErrorCode::Domain, "order fit needs at least two pairs");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [h, e] : pairs) {
    if (!(h > 0.0) || !(e > 0.0)) throw Error(ErrorCode::Domain, "order fit needs positive pairs");
    sx += std::log(h);
    sy += std::log(e);
  }
  const double n = static_cast<double>(pairs.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [h, e] : pairs) {
    const double dx = std::log(h) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::Domain, "degenerate order fit: all step sizes equal");
  PowerLawFit fit;
  fit.order = sxy / sxx;
  fit.intercept = my - fit.order * mx;
  return fit;
}

}  // namespace kdvb
