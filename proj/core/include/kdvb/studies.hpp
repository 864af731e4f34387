#pragma once

#include <string>
#include <vector>

#include "kdvb/manufactured.hpp"
#include "kdvb/metrics.hpp"
#include "kdvb/solver.hpp"

namespace kdvb {

/// Shared knobs for the manufactured-solution experiments.
struct StudyOptions {
  ManufacturedProblem problem;
  /// Sweep workers, 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Final time snapped to the nearest whole number of steps, so any dt can be swept at a
/// nominal T (e.g. T = 2 with dt = 3e-4 runs 6667 steps).
SolverConfig snap_final_time(SolverConfig config);

struct ConvergenceRow {
  double beta = 0.0;
  /// dt for temporal studies, N for spatial ones.
  double parameter = 0.0;
  double eps_l1l1 = 0.0;
  double eps_l1l2 = 0.0;
};

struct ConvergenceFit {
  double beta = 0.0;
  PowerLawFit l1l1;
  PowerLawFit l1l2;
  /// Fitted eps at the smallest swept dt.
  double extrapolated_l1l1 = 0.0;
  double extrapolated_l1l2 = 0.0;
};

struct ConvergenceTable {
  std::string parameter_name;
  std::vector<ConvergenceRow> rows;  // sorted by (beta, parameter)
  std::vector<ConvergenceFit> fits;  // temporal studies only

  const ConvergenceFit* fit_for(double beta) const;
  double eps_l1l2(double beta, double parameter) const;
};

/// dt in {(i+1) 1e-4 : i = 1..20}.
std::vector<double> temporal_dt_grid();

/// One run per (beta, dt) with base.degree, constant alpha from base, base.final_time;
/// fits log eps against log dt per beta in both norms.
ConvergenceTable temporal_convergence_study(const std::vector<double>& betas,
                                            const std::vector<double>& dts,
                                            const SolverConfig& base,
                                            const StudyOptions& options = {});

/// One run per (beta, N) at base.dt, base.final_time.
ConvergenceTable spatial_convergence_study(const std::vector<double>& betas,
                                           const std::vector<int>& degrees,
                                           const SolverConfig& base,
                                           const StudyOptions& options = {});

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  double dt = 0.0;
  double eps = 0.0;
  double eps_db = 0.0;
};

/// Row-major grid: rows follow row_values, columns follow col_values.
struct SweepGrid {
  std::string row_axis;
  std::string col_axis;
  std::vector<double> row_values;
  std::vector<double> col_values;
  std::vector<SweepCell> cells;

  const SweepCell& at(std::size_t row, std::size_t col) const {
    return cells.at(row * col_values.size() + col);
  }
};

/// beta in {(i-1) 4e-2}, i = 1..20.
std::vector<double> beta_dt_sweep_betas();
/// alpha = 0.2 + (i-1) 5e-2, i = 1..20, i.e. 0.2 to 1.15 in steps of 0.05.
std::vector<double> alpha_beta_sweep_alphas();
/// beta in {(i-1) 3.25e-2}, i = 1..20.
std::vector<double> alpha_beta_sweep_betas();

/// Evaluates every (alpha, beta, dt) cell with a fresh solver; cells are independent and
/// dispatched in parallel, results land at their grid index.
SweepGrid run_sweep(std::string row_axis, std::vector<double> row_values, std::string col_axis,
                    std::vector<double> col_values, const std::vector<SweepCell>& cells,
                    const SolverConfig& base, const StudyOptions& options);

/// Rows: dt, columns: beta; alpha = 1, base.degree (32), base.final_time (2).
SweepGrid sweep_beta_dt(const SolverConfig& base, const StudyOptions& options = {},
                        std::vector<double> betas = beta_dt_sweep_betas(),
                        std::vector<double> dts = temporal_dt_grid());

/// Rows: alpha, columns: beta, fixed dt.
SweepGrid sweep_alpha_beta(const SolverConfig& base, double dt, const StudyOptions& options = {},
                           std::vector<double> alphas = alpha_beta_sweep_alphas(),
                           std::vector<double> betas = alpha_beta_sweep_betas());

struct CaseStudyRow {
  double dt = 0.0;
  double eps = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  bool contained = false;
};

struct CaseStudyReport {
  int case_id = 0;
  CoefficientPair lower_pair;  // constant pair giving eps_min
  CoefficientPair upper_pair;  // constant pair giving eps_max
  std::vector<CaseStudyRow> rows;

  bool all_contained() const;
};

/// Time-varying case 1 or 2 against its constant bounding pairs, T = 1, N = 32 by default.
CaseStudyReport bounded_case_study(int case_id, const std::vector<double>& dts,
                                   const StudyOptions& options = {}, int degree = 32,
                                   double final_time = 1.0);

struct ModalSeries {
  std::string tag;
  std::vector<double> magnitude;
  /// Energy share of the last five modes.
  double top5_fraction = 0.0;
  /// Energy share of modes with index > 22.
  double beyond22_fraction = 0.0;
};

struct ModalDiagnostics {
  int degree = 0;
  int snapshot = 0;
  ModalSeries solution;          // U^{k+1}
  ModalSeries exact_projection;  // Galerkin projection of u(., t_{k+1})
  ModalSeries projected_source;  // C F^{k+1/2} = dt M F
  ModalSeries modal_source;      // F^{k+1/2} = M^{-1} b
};

inline constexpr int kModalConcentrationLimit = 22;

ModalSeries make_modal_series(std::string tag, const Vector& coeffs);

/// Runs base (manufactured problem) to step k + 1 and reports modal magnitudes.
ModalDiagnostics modal_spectrum_diagnostics(const SolverConfig& base, int k,
                                            const StudyOptions& options = {});

}  // namespace kdvb
