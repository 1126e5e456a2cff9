#include <benchmark/benchmark.h>

#include "warpsim/driver/generators.hpp"
#include "warpsim/driver/run.hpp"
#include "warpsim/kisa/cfg.hpp"

using namespace warpsim;

namespace {

void simulate_class(benchmark::State& state, driver::KernelClass cls, const char* machine)
{
    driver::GeneratorSpec spec;
    spec.kind = cls;
    const auto gen = driver::generate_kernel(spec, 1);
    const auto analysis = kisa::KernelAnalysis::of(gen.source.program);
    machines::MachineOverrides o;
    o.sm_count = 4;
    o.warp_size = static_cast<unsigned>(state.range(0));
    const auto sel = driver::parse_machine_selector(machine);
    if (sel.model != machines::MachineModel::Baseline) o.warp_size.reset();
    const auto config = driver::machine_config(sel, o);
    const auto memory = driver::initial_memory(gen.source);
    std::uint64_t cycles = 0;
    for (auto _ : state) {
        auto r = sim::simulate(gen.source.program, analysis, *gen.source.launch, memory, config);
        cycles += r.stats.total_cycles;
    }
    state.counters["sim_cycles/s"] = benchmark::Counter(static_cast<double>(cycles), benchmark::Counter::kIsRate);
}

} // namespace

BENCHMARK_CAPTURE(simulate_class, unit_stride_baseline, driver::KernelClass::UnitStrideCopy, "baseline")
    ->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(simulate_class, divergent_tree_baseline, driver::KernelClass::DivergentTree, "baseline")
    ->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(simulate_class, mixed_lwplus, driver::KernelClass::Mixed, "lwplus")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(simulate_class, broadcast_swplus, driver::KernelClass::BroadcastRead, "swplus")
    ->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
