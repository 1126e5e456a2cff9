#pragma once

#include <cstdint>
#include <vector>

#include "warpsim/kisa/cfg.hpp"
#include "warpsim/kisa/isa.hpp"
#include "warpsim/kisa/memory.hpp"
#include "warpsim/machines/config.hpp"
#include "warpsim/metrics/stats.hpp"

namespace warpsim::sim {

struct SimOptions {
    std::uint64_t cycle_budget = 100'000'000;
    // Re-checks stack nesting and LW+ split disjointness/coverage after every
    // completion. Throws Error on the first violation.
    bool check_invariants = false;
    bool record_traces = false;
};

struct SimResult {
    metrics::SimStats stats;
    kisa::MemoryImage memory;
    // Executed pcs per global thread id, only when record_traces is set.
    std::vector<std::vector<std::uint32_t>> traces;
};

// Cycle-level simulation of one kernel launch on one machine configuration.
// Throws ExecutionFault on an invalid access, a barrier under divergence, or
// when the cycle budget runs out (the message carries a per-warp state dump).
SimResult simulate(const kisa::Program& program, const kisa::KernelAnalysis& analysis,
                   const kisa::LaunchConfig& launch, kisa::MemoryImage memory, const machines::MachineConfig& config,
                   const SimOptions& options = {});

} // namespace warpsim::sim
