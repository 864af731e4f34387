#include "kdvb/solver.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <string>

#include "kdvb/error.hpp"

namespace kdvb {
namespace {

constexpr double kStepCountTolerance = 1e-9;
constexpr double kRefactorThreshold = 1e-15;

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::Config, message);
}

void check_finite(const Vector& v, const char* what, int step) {
  if (!v.allFinite()) {
    throw Error(ErrorCode::NonFinite,
                std::string("non-finite ") + what + " at step " + std::to_string(step));
  }
}

}  // namespace

void SolverConfig::validate() const {
  require(degree >= 3, "N must be >= 3, got " + std::to_string(degree));
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive and finite");
  require(final_time >= 0.0 && std::isfinite(final_time), "T must be non-negative and finite");
  require(norm_exponent >= 1.0, "p must be >= 1");
  require(quadrature_order >= 0, "quadrature order must be >= 0");
  const double steps = final_time / dt;
  require(std::abs(steps - std::round(steps)) * dt <= kStepCountTolerance,
          "T must be an integer multiple of dt (T/dt = " + std::to_string(steps) + ")");
  for (const auto* profile : {&coefficients.alpha, &coefficients.beta}) {
    require(profile->domain_begin() <= 0.0 && profile->domain_end() >= final_time - 1e-12,
            "coefficient profile " + profile->describe() + " does not cover [0, T]");
  }
}

int SolverConfig::num_steps() const {
  validate();
  return static_cast<int>(std::lround(final_time / dt));
}

int SolverConfig::effective_quadrature_order() const {
  return quadrature_order > 0 ? quadrature_order : default_quadrature_order(degree);
}

std::shared_ptr<const OperatorSet> shared_operators(int degree) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const OperatorSet>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(degree); it != cache.end()) return it->second;
  }
  // Assemble outside the lock; a racing duplicate is harmless.
  auto ops = std::make_shared<const OperatorSet>(oracle_operators(degree));
  std::lock_guard lock(mutex);
  return cache.emplace(degree, std::move(ops)).first->second;
}

LpgSolver::LpgSolver(SolverConfig config)
    : config_((config.validate(), std::move(config))),
      basis_(config_.degree),
      rule_(gauss_legendre(config_.effective_quadrature_order())),
      ops_(shared_operators(config_.degree)) {
  const int d = basis_.dim();
  const int q = rule_.order();
  weighted_phi_.resize(d, q);
  std::vector<double> leg(static_cast<std::size_t>(config_.degree) + 1);
  for (int i = 0; i < q; ++i) {
    const double x = rule_.nodes[static_cast<std::size_t>(i)];
    legendre_table(x, leg);
    for (int n = 0; n < d; ++n) {
      const auto un = static_cast<std::size_t>(n);
      weighted_phi_(n, i) =
          rule_.weights[static_cast<std::size_t>(i)] * legendre_c(n + 1) * (leg[un] - leg[un + 2]);
    }
  }
  mass_.compute(ops_->M);
  if (mass_.info() != Eigen::Success) {
    throw Error(ErrorCode::Singular, "mass matrix not positive definite for N=" +
                                         std::to_string(config_.degree));
  }
}

Vector LpgSolver::load_vector(const SpaceFunction& g) const {
  const int q = rule_.order();
  Vector values(q);
  for (int i = 0; i < q; ++i) {
    const double x = rule_.nodes[static_cast<std::size_t>(i)];
    values[i] = g(x);
    if (!std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "non-finite function value at quadrature node " << i << " (x=" << x << ")";
      throw Error(ErrorCode::NonFinite, msg.str());
    }
  }
  return weighted_phi_ * values;
}

Vector LpgSolver::project(const SpaceFunction& g) const { return mass_.solve(load_vector(g)); }

ModalState LpgSolver::project_initial() const {
  if (!config_.initial) return ModalState{Vector::Zero(dim()), 0};
  return ModalState{project(config_.initial), 0};
}

Vector LpgSolver::source_at(double t) const {
  if (!config_.source) return Vector::Zero(dim());
  const auto& f = config_.source;
  return load_vector([&f, t](double x) { return f(x, t); });
}

Vector LpgSolver::source_load(double t0, double t1) const {
  return 0.5 * (source_at(t0) + source_at(t1));
}

Vector LpgSolver::source_modal(double t0, double t1) const {
  return mass_.solve(source_load(t0, t1));
}

const StepFactorization& LpgSolver::factorization_for(double alpha, double beta) {
  if (!have_factorization_ || std::abs(alpha - cached_alpha_) > kRefactorThreshold ||
      std::abs(beta - cached_beta_) > kRefactorThreshold) {
    cached_step_ = build_step_matrices(*ops_, config_.dt, alpha, beta);
    cached_lu_ = StepFactorization(cached_step_, config_.degree);
    cached_alpha_ = alpha;
    cached_beta_ = beta;
    have_factorization_ = true;
  }
  return cached_lu_;
}

ModalState LpgSolver::advance(const ModalState& state, const Vector& load) {
  const double t = config_.dt * state.step;
  const double alpha = config_.coefficients.alpha(t);
  const double beta = config_.coefficients.beta(t);
  const StepFactorization& lu = factorization_for(alpha, beta);
  Vector rhs = cached_step_.B * state.coeffs + config_.dt * load;
  ModalState next{lu.solve(rhs), state.step + 1};
  check_finite(next.coeffs, "solution", next.step);
  return next;
}

ModalState LpgSolver::step(const ModalState& state) {
  if (state.step >= config_.num_steps()) {
    throw Error(ErrorCode::Domain, "step index " + std::to_string(state.step) +
                                       " already at final time index " +
                                       std::to_string(config_.num_steps()));
  }
  const double t = config_.dt * state.step;
  return advance(state, source_load(t, t + config_.dt));
}

void LpgSolver::run(const std::function<void(const ModalState&)>& visit) {
  const int steps = config_.num_steps();
  ModalState state = project_initial();
  visit(state);
  Vector left = source_at(0.0);
  for (int k = 0; k < steps; ++k) {
    Vector right = source_at(config_.dt * (k + 1));
    state = advance(state, 0.5 * (left + right));
    visit(state);
    left = std::move(right);
  }
}

Trajectory LpgSolver::run() {
  Trajectory traj;
  traj.dt = config_.dt;
  traj.states.reserve(static_cast<std::size_t>(config_.num_steps()) + 1);
  run([&traj](const ModalState& s) { traj.states.push_back(s); });
  return traj;
}

Matrix LpgSolver::trial_matrix(std::span<const double> points) const {
  const int d = dim();
  Matrix out(static_cast<Eigen::Index>(points.size()), d);
  std::vector<double> leg(static_cast<std::size_t>(config_.degree) + 1);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double x = points[j];
    if (!(std::abs(x) <= 1.0)) {
      throw Error(ErrorCode::Domain, "nodal evaluation point outside [-1,1]: " + std::to_string(x));
    }
    legendre_table(x, leg);
    for (int n = 0; n < d; ++n) {
      const auto un = static_cast<std::size_t>(n);
      out(static_cast<Eigen::Index>(j), n) =
          (1.0 - x) * legendre_c(n + 1) * (leg[un] - leg[un + 2]);
    }
  }
  return out;
}

Vector LpgSolver::nodal_values(const ModalState& state, std::span<const double> points) const {
  return trial_matrix(points) * state.coeffs;
}

}  // namespace kdvb
