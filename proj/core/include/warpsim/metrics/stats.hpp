#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace warpsim::metrics {

struct SimStats {
    std::uint64_t total_cycles = 0;
    std::vector<std::uint64_t> sm_idle_cycles;
    std::vector<std::uint64_t> sm_busy_cycles;
    std::uint64_t idle_cycles = 0; // summed over SMs

    std::uint64_t issued_warp_instructions = 0;
    std::uint64_t committed_scalar_instructions = 0;
    std::uint64_t scalar_memory_instructions = 0;

    std::uint64_t offchip_reads = 0;
    std::uint64_t offchip_writes = 0;
    std::uint64_t merged_reads = 0;
    std::uint64_t write_transactions = 0;
    // L1 lookups by read transactions.
    std::uint64_t l1_hits = 0;
    std::uint64_t l1_misses = 0;

    std::uint64_t simd_slots_issued = 0;
    std::uint64_t active_slots = 0;

    std::uint64_t splits_created = 0;
    std::uint64_t divergent_branches = 0;
    std::uint64_t max_stack_depth = 0;

    std::uint64_t offchip_requests() const { return offchip_reads + offchip_writes; }
};

// Off-chip requests per scalar memory instruction. Absent
// when the kernel issued no memory instructions.
std::optional<double> coalescing_rate(const SimStats& s);

// Idle cycles over SM-cycles, summed across SMs.
std::optional<double> idle_share(const SimStats& s);
std::optional<double> idle_share(const SimStats& s, unsigned sm);

// Committed scalar instructions per cycle.
std::optional<double> ipc(const SimStats& s);

std::optional<double> simd_efficiency(const SimStats& s);

} // namespace warpsim::metrics
