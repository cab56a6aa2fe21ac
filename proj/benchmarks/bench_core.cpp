#include "qkinetic/histories.hpp"
#include "qkinetic/kernel.hpp"
#include "qkinetic/oscillatory.hpp"
#include "qkinetic/series.hpp"

#include <benchmark/benchmark.h>

using namespace qk;

static void BM_EpsTrajectories(benchmark::State& state)
{
    Rng rng(1, 0);
    auto h = random_eps_history(static_cast<int>(state.range(0)), 3, 0.05, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(eps_trajectories(h));
}
BENCHMARK(BM_EpsTrajectories)->DenseRange(1, 5);

static void BM_AssemblePhase(benchmark::State& state)
{
    Rng rng(2, 0);
    auto h = random_eps_history(static_cast<int>(state.range(0)), 3, 0.05, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_phase(h));
}
BENCHMARK(BM_AssemblePhase)->DenseRange(1, 3);

static void BM_CrossSection(benchmark::State& state)
{
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    Vec om{0.0, 0.6, 0.8}, w{0.3, -0.2, 1.1};
    for (auto _ : state)
        benchmark::DoNotOptimize(cs(om, w));
}
BENCHMARK(BM_CrossSection);

static void BM_SampleTLimit(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    auto f0 = InitialDatum::gaussian(3);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    Rng rng(3, 0);
    Graph g = random_graph(n, rng);
    TimeLadder times = random_ladder(1.0, n, rng);
    auto prop = proposal_for(f0);
    Vec x{0.1, 0.0, 0.0}, v{0.5, 0.0, 0.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_T_limit(g, times, x, v, f0, cs, prop, rng));
}
BENCHMARK(BM_SampleTLimit)->DenseRange(1, 3);

static void BM_ITerm(benchmark::State& state)
{
    auto f0 = InitialDatum::gaussian(2);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    TermConfig cfg;
    cfg.signs = SignMode::branch;
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_I_term({Term::I2, 0, 2}, 1e-2, f0, cs, cfg));
}
BENCHMARK(BM_ITerm)->Unit(benchmark::kMillisecond);

static void BM_TEpsIntegrand(benchmark::State& state)
{
    auto f0 = InitialDatum::gaussian(2, 1.0, 0.8, Vec{0.1, 0.0}, Vec{0.3, 0.0});
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    const int n = static_cast<int>(state.range(0));
    Graph g = n == 1 ? Graph({1}) : Graph({1, 1});
    TimeLadder times = n == 1 ? TimeLadder(1.0, {0.5}) : TimeLadder(1.0, {0.6, 0.3});
    std::vector<double> s(n, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(T_eps_s_integrand(g, times, s, 0.01, Vec{0.2, 0.0}, Vec{0.5, 0.1}, f0, cs));
}
BENCHMARK(BM_TEpsIntegrand)->DenseRange(1, 2);

static void BM_GIntegral(benchmark::State& state)
{
    auto f0 = InitialDatum::gaussian(3);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    for (auto _ : state)
        benchmark::DoNotOptimize(g_integral(Graph({1, 2}), TimeLadder(1.0, {0.6, 0.3}), {3.0, 5.0}, f0, cs));
}
BENCHMARK(BM_GIntegral);

BENCHMARK_MAIN();
