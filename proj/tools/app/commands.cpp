#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "kdvb/error.hpp"
#include "kdvb/metrics.hpp"
#include "kdvb/operators.hpp"
#include "kdvb/quadrature.hpp"
#include "kdvb/stability.hpp"
#include "kdvb/studies.hpp"
#include "outputs.hpp"

namespace kdvb::app {
namespace {

using nlohmann::json;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::string mode = "temporal";
  std::string grid = "beta-dt";
  std::string target = "amplification";
  std::vector<double> dts;
  int case_id = 0;
  int degree = 0;
  double alpha = NAN;
  double beta = NAN;
  int modal_snapshot = -1;
};

struct Context {
  RunConfig cfg;
  std::string command;
  std::string hash;
  std::ostream& out;
};

std::string canonical(const Context& ctx, const std::vector<std::string>& args) {
  std::ostringstream text;
  text << ctx.command;
  for (const auto& a : args) text << '\n' << a;
  for (const auto& [key, value] : ctx.cfg.explicit_keys) text << '\n' << key << '=' << value;
  return text.str();
}

json metadata(const Context& ctx, const SolverConfig& sc, json extra = json::object()) {
  json meta{{"command", ctx.command},
            {"config_hash", ctx.hash},
            {"N", sc.degree},
            {"dt", sc.dt},
            {"T", sc.final_time},
            {"p", sc.norm_exponent},
            {"alpha", sc.coefficients.alpha.describe()},
            {"beta", sc.coefficients.beta.describe()},
            {"quadrature_order", sc.effective_quadrature_order()},
            {"problem", {{"a", ctx.cfg.problem.a}, {"b", ctx.cfg.problem.b}, {"c", ctx.cfg.problem.c}}},
            {"seed", ctx.cfg.seed}};
  meta.update(extra);
  return meta;
}

OutputWriter writer(const Context& ctx, const Options& opt, json meta) {
  return OutputWriter(resolve_output_root(opt.output), ctx.command, ctx.hash, std::move(meta));
}

void report(const Context& ctx, const OutputWriter& w) {
  const auto manifest = w.write_manifest();
  for (const auto& a : w.artifacts()) ctx.out << "wrote " << (w.dir() / a.file).string() << '\n';
  ctx.out << "manifest " << manifest.string() << '\n';
}

StudyOptions study_options(const RunConfig& cfg) {
  StudyOptions options;
  options.problem = cfg.problem;
  options.threads = cfg.threads;
  return options;
}

int cmd_solve(const Context& ctx, const Options& opt) {
  const SolverConfig sc = ctx.cfg.solver_config();
  LpgSolver solver(sc);
  const auto exact = ctx.cfg.problem.exact_function();
  EpsilonAccumulator acc(solver, exact, {1.0, 2.0, sc.norm_exponent});
  const std::vector<double> points = cgl_points(sc.degree);
  const Matrix trial = solver.trial_matrix(points);
  const int steps = sc.num_steps();

  Table modal{"kdvb.trajectory.modal", 1, {"k", "t", "n", "value"}, {}};
  Table nodal{"kdvb.trajectory.nodal", 1, {"k", "t", "x", "u_N", "u"}, {}};
  solver.run([&](const ModalState& s) {
    acc.add(s);
    if (s.step % ctx.cfg.stride != 0 && s.step != steps) return;
    const double t = sc.dt * s.step;
    for (int n = 0; n < solver.dim(); ++n) {
      modal.rows.push_back({static_cast<long long>(s.step), t, static_cast<long long>(n), s.coeffs[n]});
    }
    const Vector values = trial * s.coeffs;
    for (std::size_t j = 0; j < points.size(); ++j) {
      nodal.rows.push_back({static_cast<long long>(s.step), t, points[j],
                            values[static_cast<Eigen::Index>(j)], exact(points[j], t)});
    }
  });

  const double eps = acc.value(2);
  json result{{"eps", eps},
              {"eps_db", eps > 0.0 ? json(to_decibels(eps)) : json(nullptr)},
              {"eps_l1l1", acc.value(0)},
              {"eps_l1l2", acc.value(1)},
              {"steps", steps},
              {"stride", ctx.cfg.stride}};
  OutputWriter w = writer(ctx, opt, metadata(ctx, sc));
  w.write_table("modal", modal);
  w.write_table("nodal", nodal);
  w.write_json("error", "kdvb.error", result);

  if (opt.modal_snapshot >= 0) {
    const auto diag = modal_spectrum_diagnostics(sc, opt.modal_snapshot, study_options(ctx.cfg));
    Table spectrum{"kdvb.modal", 1, {"mode", "magnitude", "series_tag"}, {}};
    json fractions = json::object();
    for (const ModalSeries* s : {&diag.solution, &diag.exact_projection, &diag.projected_source,
                                 &diag.modal_source}) {
      for (std::size_t n = 0; n < s->magnitude.size(); ++n) {
        spectrum.rows.push_back({static_cast<long long>(n), s->magnitude[n], s->tag});
      }
      fractions[s->tag] = {{"top5_fraction", s->top5_fraction},
                           {"beyond22_fraction", s->beyond22_fraction}};
    }
    w.write_table("modal-spectrum", spectrum);
    w.write_json("modal-summary", "kdvb.modal.summary",
                 {{"snapshot", diag.snapshot}, {"fractions", fractions}});
  }
  ctx.out << std::setprecision(10) << "eps=" << eps << " p=" << sc.norm_exponent << '\n';
  report(ctx, w);
  return 0;
}

std::vector<double> default_betas() { return {0.0, 0.2, 0.4, 0.6, 0.8}; }

int cmd_convergence(const Context& ctx, const Options& opt) {
  SolverConfig base = ctx.cfg.solver_config();
  const auto betas = ctx.cfg.betas.empty() ? default_betas() : ctx.cfg.betas;
  ConvergenceTable table;
  json extra{{"mode", opt.mode}, {"betas", betas}};
  if (opt.mode == "temporal") {
    const auto dts = ctx.cfg.dts.empty() ? temporal_dt_grid() : ctx.cfg.dts;
    table = temporal_convergence_study(betas, dts, base, study_options(ctx.cfg));
    json fits = json::array();
    for (const auto& f : table.fits) {
      fits.push_back({{"beta", f.beta},
                      {"order_l1l1", f.l1l1.order},
                      {"order_l1l2", f.l1l2.order},
                      {"extrapolated_l1l1", f.extrapolated_l1l1},
                      {"extrapolated_l1l2", f.extrapolated_l1l2}});
    }
    extra["fits"] = fits;
    extra["extrapolated_definition"] = "fitted eps at the smallest swept dt";
  } else {
    std::vector<int> degrees = ctx.cfg.degrees;
    if (degrees.empty()) {
      degrees.resize(22);
      std::iota(degrees.begin(), degrees.end(), 11);
    }
    table = spatial_convergence_study(betas, degrees, base, study_options(ctx.cfg));
  }
  extra["parameter"] = table.parameter_name;
  Table csv{"kdvb.convergence", 1, {"beta", "dt_or_N", "eps_l1l1", "eps_l1l2"}, {}};
  for (const auto& r : table.rows) csv.rows.push_back({r.beta, r.parameter, r.eps_l1l1, r.eps_l1l2});
  OutputWriter w = writer(ctx, opt, metadata(ctx, base, extra));
  w.write_table("", csv);
  for (const auto& f : table.fits) {
    ctx.out << std::setprecision(4) << "beta=" << f.beta << " order L1(L1)=" << f.l1l1.order
            << " L1(L2)=" << f.l1l2.order << '\n';
  }
  report(ctx, w);
  return 0;
}

int cmd_sweep(const Context& ctx, const Options& opt) {
  SolverConfig base = ctx.cfg.solver_config();
  SweepGrid grid;
  json extra{{"grid", opt.grid}};
  if (opt.grid == "beta-dt") {
    grid = sweep_beta_dt(base, study_options(ctx.cfg),
                         ctx.cfg.betas.empty() ? beta_dt_sweep_betas() : ctx.cfg.betas,
                         ctx.cfg.dts.empty() ? temporal_dt_grid() : ctx.cfg.dts);
  } else {
    const double dt = opt.dts.empty() ? ctx.cfg.dt : opt.dts.front();
    if (opt.dts.size() > 1) throw Error(ErrorCode::Usage, "sweep --grid alpha-beta takes one --dt");
    extra["sweep_dt"] = dt;
    grid = sweep_alpha_beta(base, dt, study_options(ctx.cfg),
                            ctx.cfg.alphas.empty() ? alpha_beta_sweep_alphas() : ctx.cfg.alphas,
                            ctx.cfg.betas.empty() ? alpha_beta_sweep_betas() : ctx.cfg.betas);
  }
  extra["rows"] = grid.row_axis;
  extra["columns"] = grid.col_axis;
  Table csv{"kdvb.sweep", 1, {"alpha", "beta", "dt", "eps", "eps_db"}, {}};
  for (const auto& c : grid.cells) csv.rows.push_back({c.alpha, c.beta, c.dt, c.eps, c.eps_db});
  OutputWriter w = writer(ctx, opt, metadata(ctx, base, extra));
  w.write_table("", csv);
  ctx.out << grid.cells.size() << " cells (" << grid.row_values.size() << " x "
          << grid.col_values.size() << ")\n";
  report(ctx, w);
  return 0;
}

int cmd_spectrum(const Context& ctx, const Options& opt) {
  const RunConfig& cfg = ctx.cfg;
  const int degree = opt.degree > 0 ? opt.degree : cfg.degree;
  const double dt = opt.dts.empty() ? cfg.dt : opt.dts.front();
  if (opt.dts.size() > 1) throw Error(ErrorCode::Usage, "spectrum takes one --dt");
  if (std::isnan(opt.alpha) && !cfg.coefficients.alpha.is_constant()) {
    throw Error(ErrorCode::Config, "spectrum needs constant alpha (set alpha.value or --alpha)");
  }
  if (std::isnan(opt.beta) && !cfg.coefficients.beta.is_constant()) {
    throw Error(ErrorCode::Config, "spectrum needs constant beta (set beta.value or --beta)");
  }
  const double alpha = std::isnan(opt.alpha) ? cfg.coefficients.alpha(0.0) : opt.alpha;
  const double beta = std::isnan(opt.beta) ? cfg.coefficients.beta(0.0) : opt.beta;
  const SpectrumTarget target =
      opt.target == "step" ? SpectrumTarget::StepMatrix : SpectrumTarget::Amplification;
  const auto spectrum = amplification_spectrum(degree, dt, alpha, beta, target);

  SolverConfig sc;
  sc.degree = degree;
  sc.dt = dt;
  sc.final_time = 0.0;
  sc.coefficients = CoefficientPair::constant(alpha, beta);
  json extra{{"target", opt.target},
             {"spectral_radius", spectrum.spectral_radius()},
             {"max_residual", spectrum.max_residual}};
  Table csv{"kdvb.spectrum", 1, {"re", "im"}, {}};
  for (const auto& l : spectrum.eigenvalues) csv.rows.push_back({l.real(), l.imag()});
  OutputWriter w = writer(ctx, opt, metadata(ctx, sc, extra));
  w.write_table("", csv);
  ctx.out << std::setprecision(12) << "spectral radius " << spectrum.spectral_radius() << '\n';
  report(ctx, w);
  return 0;
}

int cmd_cases(const Context& ctx, const Options& opt) {
  if (opt.case_id != 1 && opt.case_id != 2) throw Error(ErrorCode::Usage, "cases needs --case 1 or 2");
  std::vector<double> dts = !opt.dts.empty() ? opt.dts : ctx.cfg.dts;
  if (dts.empty()) dts = {1e-4, 1e-3, 1e-2};
  const double final_time = ctx.cfg.final_time_set ? ctx.cfg.final_time : 1.0;
  const auto result =
      bounded_case_study(opt.case_id, dts, study_options(ctx.cfg), ctx.cfg.degree, final_time);

  SolverConfig sc;
  sc.degree = ctx.cfg.degree;
  sc.dt = dts.front();
  sc.final_time = final_time;
  sc.coefficients = opt.case_id == 1 ? CoefficientPair::case1() : CoefficientPair::case2();
  json extra{{"case", opt.case_id},
             {"lower_pair", {result.lower_pair.alpha(0.0), result.lower_pair.beta(0.0)}},
             {"upper_pair", {result.upper_pair.alpha(0.0), result.upper_pair.beta(0.0)}},
             {"all_contained", result.all_contained()}};
  Table csv{"kdvb.cases", 1, {"dt", "eps", "eps_min", "eps_max", "contained"}, {}};
  for (const auto& r : result.rows) {
    csv.rows.push_back({r.dt, r.eps, r.eps_min, r.eps_max, static_cast<long long>(r.contained)});
    ctx.out << std::setprecision(6) << "dt=" << r.dt << " eps_min=" << r.eps_min << " eps=" << r.eps
            << " eps_max=" << r.eps_max << (r.contained ? " contained" : " NOT contained") << '\n';
  }
  OutputWriter w = writer(ctx, opt, metadata(ctx, sc, extra));
  w.write_table("", csv);
  report(ctx, w);
  if (!result.all_contained()) {
    throw Error(ErrorCode::Containment, "case " + std::to_string(opt.case_id) +
                                            ": eps outside [eps_min, eps_max] for at least one dt");
  }
  return 0;
}

int cmd_verify(const Context& ctx, const Options& opt) {
  const int degree = opt.degree > 0 ? opt.degree : ctx.cfg.degree;
  const auto result = verify_closed_forms(degree);
  Table csv{"kdvb.discrepancy", 1, {"kind", "row", "col", "closed_form", "oracle", "abs_diff"}, {}};
  for (const auto& e : result.entries) {
    csv.rows.push_back({std::string(operator_name(e.kind)), static_cast<long long>(e.row),
                        static_cast<long long>(e.col), e.closed_form, e.oracle, e.abs_diff});
  }
  json deviations = json::object();
  bool unexpected = false;
  for (OperatorKind kind : {OperatorKind::K, OperatorKind::M, OperatorKind::Q, OperatorKind::L}) {
    deviations[std::string(operator_name(kind))] = result.deviation(kind);
  }
  // The tabulated K entries are known to differ from the weak form on both off-diagonals;
  // anything else is a regression.
  for (const auto& e : result.entries) {
    if (e.kind != OperatorKind::K || std::abs(e.row - e.col) != 1) unexpected = true;
  }
  SolverConfig sc;
  sc.degree = degree;
  sc.final_time = 0.0;
  json extra{{"tolerance", result.tolerance},
             {"max_deviation", deviations},
             {"solver_operators", "quadrature oracle"}};
  OutputWriter w = writer(ctx, opt, metadata(ctx, sc, extra));
  w.write_table("", csv);
  for (OperatorKind kind : {OperatorKind::L, OperatorKind::Q, OperatorKind::K, OperatorKind::M}) {
    ctx.out << operator_name(kind) << ": " << result.count(kind) << " entries above "
            << result.tolerance << " (max deviation " << std::setprecision(3)
            << result.deviation(kind) << ")\n";
  }
  if (result.count(OperatorKind::K) > 0) {
    ctx.out << "K: tabulated off-diagonal entries differ from the weak form; the solver uses "
               "quadrature-assembled operators\n";
  }
  report(ctx, w);
  if (unexpected) {
    throw Error(ErrorCode::Verification,
                "closed-form operators disagree with quadrature beyond the known K off-diagonals");
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Legendre-Petrov-Galerkin solver for the linear KdV-Burgers equation"};
  app.set_version_flag("--version", "kdvb 0.1.0");
  app.require_subcommand(1, 1);
  Options opt;
  app.add_option("--config", opt.config_path, "Key-value configuration file");
  app.add_option("--set", opt.overrides, "Override a configuration key (key=value), repeatable")
      ->allow_extra_args(false);
  app.add_option("--output", opt.output, "Output directory (default $KDVB_OUTPUT_ROOT or ./kdvb-output)");

  auto* solve = app.add_subcommand("solve", "Run the manufactured problem and export the trajectory");
  solve->add_option("--modal-snapshot", opt.modal_snapshot,
                    "Also export modal spectra after step K+1")
      ->check(CLI::NonNegativeNumber);
  auto* convergence = app.add_subcommand("convergence", "Temporal or spatial convergence study");
  convergence->add_option("--mode", opt.mode)->check(CLI::IsMember({"temporal", "spatial"}));
  auto* sweep = app.add_subcommand("sweep", "20x20 parameter sweeps");
  sweep->add_option("--grid", opt.grid)->check(CLI::IsMember({"beta-dt", "alpha-beta"}));
  sweep->add_option("--dt", opt.dts, "Step of the alpha-beta sweep");
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the step map");
  spectrum->add_option("--n", opt.degree)->check(CLI::Range(3, 512));
  spectrum->add_option("--dt", opt.dts);
  spectrum->add_option("--alpha", opt.alpha);
  spectrum->add_option("--beta", opt.beta);
  spectrum->add_option("--target", opt.target)->check(CLI::IsMember({"amplification", "step"}));
  auto* cases = app.add_subcommand("cases", "Time-varying coefficients against constant bounds");
  cases->add_option("--case", opt.case_id)->required()->check(CLI::IsMember({1, 2}));
  cases->add_option("--dt", opt.dts)->delimiter(',');
  auto* verify = app.add_subcommand("verify", "Check closed-form operators against quadrature");
  verify->add_option("--n", opt.degree)->check(CLI::Range(3, 512));
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_code_name(ErrorCode::Usage) << ": " << e.what() << '\n';
    return 2;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    Context ctx{parse_config(opt.config_path, opt.overrides), chosen->get_name(), "", out};
    std::vector<std::string> canonical_args;
    for (const auto* option : chosen->get_options()) {
      if (option->count() > 0) {
        for (const auto& r : option->results()) canonical_args.push_back(option->get_name() + "=" + r);
      }
    }
    ctx.hash = fnv1a_hex(canonical(ctx, canonical_args));
    const std::string& name = ctx.command;
    if (name == "solve") return cmd_solve(ctx, opt);
    if (name == "convergence") return cmd_convergence(ctx, opt);
    if (name == "sweep") return cmd_sweep(ctx, opt);
    if (name == "spectrum") return cmd_spectrum(ctx, opt);
    if (name == "cases") return cmd_cases(ctx, opt);
    if (name == "verify") return cmd_verify(ctx, opt);
    throw Error(ErrorCode::Usage, "unknown command " + name);
  } catch (const Error& e) {
    err << error_code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "E_INTERNAL: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace kdvb::app
