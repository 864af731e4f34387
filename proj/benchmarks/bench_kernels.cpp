#include <benchmark/benchmark.h>

#include "kdvb/manufactured.hpp"
#include "kdvb/operators.hpp"
#include "kdvb/quadrature.hpp"
#include "kdvb/solver.hpp"
#include "kdvb/stability.hpp"

using namespace kdvb;

static void BM_GaussLegendre(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_legendre(q));
}
BENCHMARK(BM_GaussLegendre)->Arg(64)->Arg(128)->Arg(256);

static void BM_OracleOperators(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_operators(degree));
}
BENCHMARK(BM_OracleOperators)->Arg(16)->Arg(32)->Arg(64);

static void BM_ClosedFormOperators(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_operators(degree));
}
BENCHMARK(BM_ClosedFormOperators)->Arg(16)->Arg(32)->Arg(64);

static SolverConfig manufactured(int degree, double final_time) {
  SolverConfig cfg;
  cfg.degree = degree;
  cfg.dt = 1e-4;
  cfg.final_time = final_time;
  return ManufacturedProblem{}.configure(cfg);
}

static void BM_Step(benchmark::State& state) {
  LpgSolver solver(manufactured(static_cast<int>(state.range(0)), 1.0));
  const ModalState start = solver.project_initial();
  for (auto _ : state) benchmark::DoNotOptimize(solver.step(start));
}
BENCHMARK(BM_Step)->Arg(16)->Arg(32)->Arg(64);

static void BM_Run(benchmark::State& state) {
  const SolverConfig cfg = manufactured(32, 0.2);
  for (auto _ : state) {
    LpgSolver solver(cfg);
    int last = 0;
    solver.run([&last](const ModalState& s) { last = s.step; });
    benchmark::DoNotOptimize(last);
  }
  state.SetItemsProcessed(state.iterations() * cfg.num_steps());
}
BENCHMARK(BM_Run)->Unit(benchmark::kMillisecond);

static void BM_AmplificationSpectrum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(amplification_spectrum(42, 1.0, 1.0, 0.3));
}
BENCHMARK(BM_AmplificationSpectrum)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
