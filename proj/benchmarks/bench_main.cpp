#include <benchmark/benchmark.h>

#include "dsf/analytic.hpp"
#include "dsf/dde.hpp"
#include "dsf/lambertw.hpp"
#include "dsf/oracle.hpp"
#include "dsf/quadrature.hpp"

using namespace dsf;

static void BM_LambertW(benchmark::State& state) {
    const long k = state.range(0);
    const Complex z = lambert_argument(make_params(1.0, 0.895, kPi, 10.0, 3));
    for (auto _ : state) benchmark::DoNotOptimize(lambert_w(k, z));
}
BENCHMARK(BM_LambertW)->Arg(0)->Arg(-1)->Arg(50)->Arg(2000);

static void BM_SeriesBeta(benchmark::State& state) {
    const auto p = make_params(1.0, 0.895, kPi, 10.0, 3);
    const SeriesEvaluator series(p, make_series_context(p, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(series.beta(0.7, 1, 6.0));
}
BENCHMARK(BM_SeriesBeta)->Arg(200)->Arg(2000);

static void BM_DdeMode(benchmark::State& state) {
    const auto p = make_params(1.0, 0.895, kPi, 40.0, 3);
    const DdeMode m = make_dde_mode(p, 0.7, 1);
    std::vector<double> times(401);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 0.1 * static_cast<double>(i);
    for (auto _ : state) benchmark::DoNotOptimize(solve_dde_adaptive(p, m, times, 1e-9));
}
BENCHMARK(BM_DdeMode)->Unit(benchmark::kMicrosecond);

static void BM_SingleExcitation(benchmark::State& state) {
    const auto p = make_params(1.0, 0.895, kPi, 10.0, 3);
    BetaEngine e;
    const auto quad = make_quadrature_spec(static_cast<double>(state.range(0)), 0.1, 1e-4);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_single_excitation(p, e, quad, {2.0, 5.0, 10.0}));
}
BENCHMARK(BM_SingleExcitation)->Arg(40)->Unit(benchmark::kMillisecond);

// one unit of time on grids of growing size: cost grows with the square of the mode count
static void BM_OracleStep(benchmark::State& state) {
    const auto p = make_params(1.0, 0.895, kPi, 1.0, 2);
    const ModeGrid grid = make_mode_grid(static_cast<double>(state.range(0)), 0.25);
    FullOracleOptions opt;
    opt.dt = std::min(1e-2, 0.05 / grid.half_width);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_full(p, grid, opt));
    state.counters["modes"] = static_cast<double>(grid.size());
}
BENCHMARK(BM_OracleStep)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
