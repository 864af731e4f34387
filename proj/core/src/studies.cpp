#include "kdvb/studies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kdvb/error.hpp"
#include "kdvb/parallel.hpp"

namespace kdvb {
namespace {

std::vector<double> constant_betas_sorted(std::vector<double> betas) {
  std::sort(betas.begin(), betas.end());
  return betas;
}

double constant_alpha(const SolverConfig& base) {
  if (!base.coefficients.alpha.is_constant()) {
    throw Error(ErrorCode::Config, "study needs a constant alpha in the base configuration");
  }
  return base.coefficients.alpha(0.0);
}

SolverConfig cell_config(const SolverConfig& base, const ManufacturedProblem& problem,
                         double alpha, double beta, double dt) {
  SolverConfig cfg = base;
  cfg.dt = dt;
  cfg.coefficients = CoefficientPair::constant(alpha, beta);
  return problem.configure(snap_final_time(cfg));
}

}  // namespace

SolverConfig snap_final_time(SolverConfig config) {
  if (!(config.dt > 0.0)) throw Error(ErrorCode::Config, "dt must be positive");
  const double steps = std::round(config.final_time / config.dt);
  config.final_time = steps * config.dt;
  return config;
}

const ConvergenceFit* ConvergenceTable::fit_for(double beta) const {
  for (const auto& f : fits)
    if (f.beta == beta) return &f;
  return nullptr;
}

double ConvergenceTable::eps_l1l2(double beta, double parameter) const {
  for (const auto& r : rows)
    if (r.beta == beta && r.parameter == parameter) return r.eps_l1l2;
  throw Error(ErrorCode::Index, "no convergence row for beta=" + std::to_string(beta) +
                                    ", " + parameter_name + "=" + std::to_string(parameter));
}

std::vector<double> temporal_dt_grid() {
  std::vector<double> out;
  for (int i = 1; i <= 20; ++i) out.push_back((i + 1) * 1e-4);
  return out;
}

ConvergenceTable temporal_convergence_study(const std::vector<double>& betas,
                                            const std::vector<double>& dts,
                                            const SolverConfig& base,
                                            const StudyOptions& options) {
  const double alpha = constant_alpha(base);
  const auto sorted_betas = constant_betas_sorted(betas);
  std::vector<double> sorted_dts = dts;
  std::sort(sorted_dts.begin(), sorted_dts.end());

  ConvergenceTable table;
  table.parameter_name = "dt";
  table.rows.resize(sorted_betas.size() * sorted_dts.size());
  const auto exact = options.problem.exact_function();
  parallel_for(table.rows.size(), options.threads, [&](std::size_t idx) {
    const double beta = sorted_betas[idx / sorted_dts.size()];
    const double dt = sorted_dts[idx % sorted_dts.size()];
    const auto cfg = cell_config(base, options.problem, alpha, beta, dt);
    const auto eps = run_and_measure(cfg, exact, {1.0, 2.0});
    table.rows[idx] = ConvergenceRow{beta, dt, eps[0], eps[1]};
  });

  for (std::size_t b = 0; b < sorted_betas.size(); ++b) {
    std::vector<std::pair<double, double>> l1;
    std::vector<std::pair<double, double>> l2;
    for (std::size_t j = 0; j < sorted_dts.size(); ++j) {
      const auto& row = table.rows[b * sorted_dts.size() + j];
      l1.emplace_back(row.parameter, row.eps_l1l1);
      l2.emplace_back(row.parameter, row.eps_l1l2);
    }
    ConvergenceFit fit;
    fit.beta = sorted_betas[b];
    fit.l1l1 = fit_order(l1);
    fit.l1l2 = fit_order(l2);
    fit.extrapolated_l1l1 = fit.l1l1.predict(sorted_dts.front());
    fit.extrapolated_l1l2 = fit.l1l2.predict(sorted_dts.front());
    table.fits.push_back(fit);
  }
  return table;
}

ConvergenceTable spatial_convergence_study(const std::vector<double>& betas,
                                           const std::vector<int>& degrees,
                                           const SolverConfig& base,
                                           const StudyOptions& options) {
  const double alpha = constant_alpha(base);
  const auto sorted_betas = constant_betas_sorted(betas);
  std::vector<int> sorted_degrees = degrees;
  std::sort(sorted_degrees.begin(), sorted_degrees.end());

  ConvergenceTable table;
  table.parameter_name = "N";
  table.rows.resize(sorted_betas.size() * sorted_degrees.size());
  const auto exact = options.problem.exact_function();
  parallel_for(table.rows.size(), options.threads, [&](std::size_t idx) {
    const double beta = sorted_betas[idx / sorted_degrees.size()];
    const int degree = sorted_degrees[idx % sorted_degrees.size()];
    SolverConfig with_degree = base;
    with_degree.degree = degree;
    const auto cfg = cell_config(with_degree, options.problem, alpha, beta, base.dt);
    const auto eps = run_and_measure(cfg, exact, {1.0, 2.0});
    table.rows[idx] = ConvergenceRow{beta, static_cast<double>(degree), eps[0], eps[1]};
  });
  return table;
}

std::vector<double> beta_dt_sweep_betas() {
  std::vector<double> out;
  for (int i = 1; i <= 20; ++i) out.push_back((i - 1) * 4e-2);
  return out;
}

std::vector<double> alpha_beta_sweep_alphas() {
  std::vector<double> out;
  for (int i = 1; i <= 20; ++i) out.push_back(0.2 + (i - 1) * 5e-2);
  return out;
}

std::vector<double> alpha_beta_sweep_betas() {
  std::vector<double> out;
  for (int i = 1; i <= 20; ++i) out.push_back((i - 1) * 3.25e-2);
  return out;
}

SweepGrid run_sweep(std::string row_axis, std::vector<double> row_values, std::string col_axis,
                    std::vector<double> col_values, const std::vector<SweepCell>& cells,
                    const SolverConfig& base, const StudyOptions& options) {
  if (cells.size() != row_values.size() * col_values.size()) {
    throw Error(ErrorCode::Domain, "sweep cell count does not match its axes");
  }
  SweepGrid grid{std::move(row_axis), std::move(col_axis), std::move(row_values),
                 std::move(col_values), cells};
  const auto exact = options.problem.exact_function();
  parallel_for(grid.cells.size(), options.threads, [&](std::size_t idx) {
    SweepCell& cell = grid.cells[idx];
    const auto cfg = cell_config(base, options.problem, cell.alpha, cell.beta, cell.dt);
    cell.eps = run_and_measure(cfg, exact, {base.norm_exponent})[0];
    cell.eps_db = to_decibels(cell.eps);
  });
  return grid;
}

SweepGrid sweep_beta_dt(const SolverConfig& base, const StudyOptions& options,
                        std::vector<double> betas, std::vector<double> dts) {
  const double alpha = constant_alpha(base);
  std::vector<SweepCell> cells;
  for (double dt : dts)
    for (double beta : betas) cells.push_back(SweepCell{alpha, beta, dt, 0.0, 0.0});
  return run_sweep("dt", std::move(dts), "beta", std::move(betas), cells, base, options);
}

SweepGrid sweep_alpha_beta(const SolverConfig& base, double dt, const StudyOptions& options,
                           std::vector<double> alphas, std::vector<double> betas) {
  std::vector<SweepCell> cells;
  for (double alpha : alphas)
    for (double beta : betas) cells.push_back(SweepCell{alpha, beta, dt, 0.0, 0.0});
  return run_sweep("alpha", std::move(alphas), "beta", std::move(betas), cells, base, options);
}

bool CaseStudyReport::all_contained() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.contained; });
}

CaseStudyReport bounded_case_study(int case_id, const std::vector<double>& dts,
                                   const StudyOptions& options, int degree, double final_time) {
  CaseStudyReport report;
  report.case_id = case_id;
  CoefficientPair varying;
  if (case_id == 1) {
    varying = CoefficientPair::case1();
    report.upper_pair = CoefficientPair::constant(5.0 / std::sqrt(2.0), std::sqrt(2.0));
    report.lower_pair = CoefficientPair::constant(5.0, 1.0);
  } else if (case_id == 2) {
    varying = CoefficientPair::case2();
    report.upper_pair = CoefficientPair::constant(1.0, 0.5);
    report.lower_pair = CoefficientPair::constant(4.0, 0.25);
  } else {
    throw Error(ErrorCode::Config, "case must be 1 or 2, got " + std::to_string(case_id));
  }

  const auto exact = options.problem.exact_function();
  const CoefficientPair* pairs[3] = {&varying, &report.lower_pair, &report.upper_pair};
  std::vector<double> eps(dts.size() * 3);
  parallel_for(eps.size(), options.threads, [&](std::size_t idx) {
    SolverConfig cfg;
    cfg.degree = degree;
    cfg.dt = dts[idx / 3];
    cfg.final_time = final_time;
    cfg.coefficients = *pairs[idx % 3];
    cfg = options.problem.configure(snap_final_time(cfg));
    eps[idx] = run_and_measure(cfg, exact, {2.0})[0];
  });
  for (std::size_t i = 0; i < dts.size(); ++i) {
    CaseStudyRow row{dts[i], eps[3 * i], eps[3 * i + 1], eps[3 * i + 2], false};
    row.contained = row.eps_min <= row.eps && row.eps <= row.eps_max;
    report.rows.push_back(row);
  }
  return report;
}

ModalSeries make_modal_series(std::string tag, const Vector& coeffs) {
  ModalSeries series;
  series.tag = std::move(tag);
  double total = 0.0;
  double top = 0.0;
  double beyond = 0.0;
  const auto d = coeffs.size();
  for (Eigen::Index n = 0; n < d; ++n) {
    const double mag = std::abs(coeffs[n]);
    series.magnitude.push_back(mag);
    const double energy = mag * mag;
    total += energy;
    if (n >= d - 5) top += energy;
    if (n > kModalConcentrationLimit) beyond += energy;
  }
  if (total > 0.0) {
    series.top5_fraction = top / total;
    series.beyond22_fraction = beyond / total;
  }
  return series;
}

ModalDiagnostics modal_spectrum_diagnostics(const SolverConfig& base, int k,
                                            const StudyOptions& options) {
  if (k < 0) throw Error(ErrorCode::Domain, "snapshot index must be >= 0");
  SolverConfig cfg = base;
  cfg.final_time = (k + 1) * cfg.dt;
  cfg = options.problem.configure(cfg);
  LpgSolver solver(cfg);

  ModalState state = solver.project_initial();
  while (state.step < k + 1) state = solver.step(state);

  const double t_next = cfg.dt * (k + 1);
  const ManufacturedProblem problem = options.problem;
  const Vector exact = solver.project([&](double x) { return problem.exact(x, t_next); });
  const double t_k = cfg.dt * k;
  const Vector modal_source = solver.source_modal(t_k, t_next);
  const Vector projected = cfg.dt * (solver.operators().M * modal_source);

  ModalDiagnostics out;
  out.degree = cfg.degree;
  out.snapshot = k;
  out.solution = make_modal_series("solution", state.coeffs);
  out.exact_projection = make_modal_series("exact", exact);
  out.projected_source = make_modal_series("projected_source", projected);
  out.modal_source = make_modal_series("modal_source", modal_source);
  return out;
}

}  // namespace kdvb
