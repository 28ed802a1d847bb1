#include "tailkit/asym.hpp"
#include "tailkit/dependence.hpp"
#include "tailkit/estimators.hpp"
#include "tailkit/normal.hpp"
#include "tailkit/perturbed.hpp"
#include "tailkit/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace tailkit;

static void BM_LogNormalSf(benchmark::State& state) {
    double t = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_std_normal_sf(t));
        t = t < 60.0 ? t + 0.37 : 0.5;
    }
}
BENCHMARK(BM_LogNormalSf);

static void BM_Thm1Asymptotic(benchmark::State& state) {
    FactorModelSpec m;
    m.rho = 0.5;
    m.base_tail = RegVaryingSpec{1.0, 0.2, 1.0};
    m.idiosyncratic = Idiosyncratic::perturbed;
    const auto N = ClaimCountSpec::geometric(0.5, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(random_sum_tail_asym_thm1_at_log(m, N, 12.0));
}
BENCHMARK(BM_Thm1Asymptotic);

static void BM_Sum2Quadrature(benchmark::State& state) {
    const double log_u = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exact_sum2_quadrature_at_log(log_u));
}
BENCHMARK(BM_Sum2Quadrature)->Arg(4)->Arg(8)->Arg(20);

static void BM_MaxTailQuadrature(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(max_tail_quadrature_at_log(3, 0.6, 8.0));
}
BENCHMARK(BM_MaxTailQuadrature);

static void BM_Cholesky(benchmark::State& state) {
    const auto m = build_equicorrelated(static_cast<std::size_t>(state.range(0)), 0.36);
    for (auto _ : state) benchmark::DoNotOptimize(cholesky(m));
}
BENCHMARK(BM_Cholesky)->Arg(10)->Arg(100);

static void BM_PerturbedSample(benchmark::State& state) {
    const PerturbedTailSpec spec(RegVaryingSpec{0.1, 0.0, 1.0});
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(spec.sample_log(rng));
}
BENCHMARK(BM_PerturbedSample);

static void BM_ConditionalEstimator(benchmark::State& state) {
    FactorModelSpec m;
    m.rho = 0.5;
    const auto N = ClaimCountSpec::geometric(0.5, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(ak_conditional_tail(m, N, std::exp(8.0), {10'000, 1, 1}));
    state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_ConditionalEstimator)->Unit(benchmark::kMillisecond);

static void BM_CrudeEstimator(benchmark::State& state) {
    FactorModelSpec m;
    m.rho = 0.5;
    const auto N = ClaimCountSpec::geometric(0.5, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(crude_mc_tail(m, N, std::exp(2.0), Statistic::sum, {10'000, 1, 1}));
    state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_CrudeEstimator)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
