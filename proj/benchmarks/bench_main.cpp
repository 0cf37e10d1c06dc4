#include "sara/channel.hpp"
#include "sara/exact_oracle.hpp"
#include "sara/sim_engine.hpp"
#include "sara/units.hpp"

#include <benchmark/benchmark.h>

namespace {

sara::ChannelParams no_fading()
{
    sara::ChannelParams p;
    p.fading = sara::Fading::off;
    return p;
}

void BM_SubsetTableBuild(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const sara::Topology t = sara::generate_topology_with_count(n, sara::Region{30, 30}, 5.0, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(sara::SubsetSinrTable::build(t, no_fading()));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n) << (n - 1));
}
BENCHMARK(BM_SubsetTableBuild)->DenseRange(4, 16, 4);

void BM_FixedPointSweep(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const sara::Topology t = sara::generate_topology_with_count(n, sara::Region{30, 30}, 5.0, 1);
    const auto table = sara::SubsetSinrTable::build(t, no_fading());
    const double beta = sara::db_to_linear(3.0);
    const sara::ProbBounds bounds;
    std::vector<double> phi(n, 0.5);
    for (auto _ : state)
        for (std::size_t i = 0; i < n; ++i)
            benchmark::DoNotOptimize(sara::clamped_interference_function(i, table, phi, beta, bounds));
}
BENCHMARK(BM_FixedPointSweep)->DenseRange(4, 16, 4);

void BM_ActiveSinrs(benchmark::State& state)
{
    const auto k = static_cast<std::uint32_t>(state.range(0));
    const sara::Topology t = sara::generate_topology_with_count(k, sara::Region{}, 5.0, 1);
    const sara::ChannelParams p;
    const sara::GainMatrix mean = sara::mean_gains(t, p);
    std::vector<std::uint32_t> active(k);
    for (std::uint32_t i = 0; i < k; ++i)
        active[i] = i;
    std::vector<double> out(k);
    sara::Rng rng(1);
    for (auto _ : state) {
        sara::active_sinrs(active, mean, p, rng, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * k * k);
}
BENCHMARK(BM_ActiveSinrs)->RangeMultiplier(4)->Range(16, 256);

void BM_EngineSlots(benchmark::State& state, sara::PolicySpec policy)
{
    sara::RunConfig c;
    c.policy = std::move(policy);
    c.slots = 1000;
    c.warmup = 0;
    const sara::Topology t = sara::drop_topology(c, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(sara::run_drop(c, t, 1));
    state.SetItemsProcessed(state.iterations() * c.slots);
}
BENCHMARK_CAPTURE(BM_EngineSlots, optimal_aloha, sara::PolicySpec{sara::OptimalAloha{}})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineSlots, sara, sara::PolicySpec{sara::Sara{}})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EngineSlots, csma_fixed, sara::PolicySpec{sara::CsmaFixed{}})->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
