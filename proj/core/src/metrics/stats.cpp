#include "warpsim/metrics/stats.hpp"

namespace warpsim::metrics {

std::optional<double> coalescing_rate(const SimStats& s)
{
    if (s.scalar_memory_instructions == 0) return std::nullopt;
    return static_cast<double>(s.offchip_requests()) / static_cast<double>(s.scalar_memory_instructions);
}

std::optional<double> idle_share(const SimStats& s)
{
    const std::uint64_t sm_cycles = s.total_cycles * s.sm_idle_cycles.size();
    if (sm_cycles == 0) return std::nullopt;
    return static_cast<double>(s.idle_cycles) / static_cast<double>(sm_cycles);
}

std::optional<double> idle_share(const SimStats& s, unsigned sm)
{
    if (s.total_cycles == 0 || sm >= s.sm_idle_cycles.size()) return std::nullopt;
    return static_cast<double>(s.sm_idle_cycles[sm]) / static_cast<double>(s.total_cycles);
}

std::optional<double> ipc(const SimStats& s)
{
    if (s.total_cycles == 0) return std::nullopt;
    return static_cast<double>(s.committed_scalar_instructions) / static_cast<double>(s.total_cycles);
}

std::optional<double> simd_efficiency(const SimStats& s)
{
    if (s.simd_slots_issued == 0) return std::nullopt;
    return static_cast<double>(s.active_slots) / static_cast<double>(s.simd_slots_issued);
}

} // namespace warpsim::metrics
