#include <benchmark/benchmark.h>

#include "valveflow/gas.hpp"
#include "valveflow/rcm.hpp"
#include "valveflow/riemann.hpp"
#include "valveflow/valve.hpp"
#include "valveflow/wavefront.hpp"

using namespace valveflow;

static void BM_SolveRp(benchmark::State& st) {
  const GasLaw law(2.0);
  const State ul(6, 1), ur(1, -1);
  for (auto _ : st) benchmark::DoNotOptimize(solve_rp(ul, ur, law));
}
BENCHMARK(BM_SolveRp);

static void BM_HatU(benchmark::State& st) {
  const GasLaw law(2.0);
  const State ul(0.25, 2.5);
  for (auto _ : st) benchmark::DoNotOptimize(hat_u(2.0, ul, law));
}
BENCHMARK(BM_HatU);

static void BM_SolveCoupledAitch(benchmark::State& st) {
  const ValveParams p(3.0, GasLaw(2.0));
  const State ul(6, 1), ur(1, -1);
  for (auto _ : st) benchmark::DoNotOptimize(solve_coupled(SolverKind::aitch(), ul, ur, p));
}
BENCHMARK(BM_SolveCoupledAitch);

// One RCM step; the argument is the number of cells.
static void BM_RcmStep(benchmark::State& st) {
  RunConfig cfg;
  const double dx = 2.0 / static_cast<double>(st.range(0));
  cfg.grid = GridSpec::make(-1.0, 1.0, dx);
  cfg.valve = ValveParams(3.0, GasLaw(2.0));
  const Field f0 = project_initial(PiecewiseConstant({0.0}, {State(6, 1), State(1, -1)}), cfg.grid);
  const double dt = cfl_dt(f0, cfg, 1.0);
  for (auto _ : st) {
    Field f = f0;
    benchmark::DoNotOptimize(step(f, cfg, dt, 0.375));
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_RcmStep)->Arg(1000)->Arg(4000);

static void BM_BuildExact(benchmark::State& st) {
  const ScenarioData s =
      ScenarioData::from_sonic_left(State(3, 4), State(8, 0), ValveParams(2.2, GasLaw(1.0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_exact(s));
}
BENCHMARK(BM_BuildExact);

BENCHMARK_MAIN();
