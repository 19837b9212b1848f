#include <benchmark/benchmark.h>

#include "topokey/detect.hpp"
#include "topokey/filtration.hpp"
#include "topokey/loss.hpp"
#include "topokey/persistence.hpp"
#include "topokey/synth.hpp"

using namespace topokey;

static HeightMap random_map(std::size_t side, std::uint64_t seed)
{
    Rng rng(seed);
    return random_distinct_map({side, side}, rng);
}

static void BM_H1Generators(benchmark::State& state)
{
    const auto map = random_map(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(h1_generators(map));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(map.size()));
}
BENCHMARK(BM_H1Generators)->Arg(32)->Arg(208)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_H0Pairs(benchmark::State& state)
{
    const auto map = random_map(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(h0_pairs(map));
}
BENCHMARK(BM_H0Pairs)->Arg(208)->Unit(benchmark::kMillisecond);

static void BM_BoundaryReduction(benchmark::State& state)
{
    const auto map = random_map(static_cast<std::size_t>(state.range(0)), 3);
    const auto filtration = build_filtration(map);
    for (auto _ : state)
        benchmark::DoNotOptimize(reduce_boundary_matrix(filtration));
}
BENCHMARK(BM_BoundaryReduction)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Loss(benchmark::State& state)
{
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto a = random_map(side, 4);
    const auto b = random_map(side, 5);
    const auto u = CorrespondenceMap::identity(a.shape());
    for (auto _ : state)
        benchmark::DoNotOptimize(detector_loss(a, b, u));
}
BENCHMARK(BM_Loss)->Arg(208)->Unit(benchmark::kMillisecond);

static void BM_Nms(benchmark::State& state)
{
    const auto map = random_map(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(nms_keypoints(map, {0.5}));
}
BENCHMARK(BM_Nms)->Arg(208)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
