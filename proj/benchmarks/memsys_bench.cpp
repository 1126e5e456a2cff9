#include <benchmark/benchmark.h>

#include <random>

#include "warpsim/memsys/cache.hpp"
#include "warpsim/memsys/coalescer.hpp"

using namespace warpsim::memsys;

static void BM_CoalesceUnitStride(benchmark::State& state)
{
    const unsigned lanes = static_cast<unsigned>(state.range(0));
    std::vector<LaneAccess> acc;
    for (unsigned l = 0; l < lanes; ++l) acc.push_back({l, 0x1000 + 4 * l, false});
    for (auto _ : state) benchmark::DoNotOptimize(coalesce_warp_access(acc));
}
BENCHMARK(BM_CoalesceUnitStride)->Arg(8)->Arg(32)->Arg(64);

static void BM_CoalesceScattered(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    std::vector<LaneAccess> acc;
    for (unsigned l = 0; l < 64; ++l) acc.push_back({l, static_cast<std::uint32_t>(4 * (rng() % 65536)), false});
    for (auto _ : state) benchmark::DoNotOptimize(coalesce_warp_access(acc));
}
BENCHMARK(BM_CoalesceScattered);

static void BM_L1RandomReads(benchmark::State& state)
{
    L1Cache cache(CacheGeometry{});
    std::mt19937_64 rng(2);
    std::vector<std::uint32_t> segs(4096);
    for (auto& s : segs) s = 64 * static_cast<std::uint32_t>(rng() % 2048);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto seg = segs[i++ % segs.size()];
        if (!cache.access(seg, false).hit) cache.fill(seg);
    }
}
BENCHMARK(BM_L1RandomReads);
