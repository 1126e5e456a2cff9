#include "warpsim/simt/formation.hpp"

#include <algorithm>
#include <string>

#include "warpsim/error.hpp"

namespace warpsim::simt {

std::vector<WarpShape> block_warp_shapes(std::uint32_t block_threads, unsigned warp_size)
{
    std::vector<WarpShape> shapes;
    for (std::uint32_t t = 0; t < block_threads; t += warp_size) {
        shapes.push_back({t, static_cast<unsigned>(std::min<std::uint32_t>(warp_size, block_threads - t))});
    }
    return shapes;
}

std::uint32_t resident_block_capacity(std::uint32_t block_threads, const ResidencyLimits& limits)
{
    if (block_threads == 0 || block_threads > limits.max_threads_per_sm) {
        throw ConfigError("block", std::to_string(block_threads) + " threads per block exceed the " +
                                       std::to_string(limits.max_threads_per_sm) + "-thread SM limit");
    }
    return std::min(limits.max_ctas_per_sm, limits.max_threads_per_sm / block_threads);
}

std::vector<WarpContext> make_block_warps(std::uint32_t block_id, std::uint32_t block_threads, unsigned warp_size,
                                          std::uint32_t& next_warp_id)
{
    std::vector<WarpContext> warps;
    for (const auto& s : block_warp_shapes(block_threads, warp_size)) {
        warps.emplace_back(next_warp_id++, block_id, s.first_thread, s.lanes);
    }
    return warps;
}

std::vector<SmLaunchPlan> form_warps(const kisa::LaunchConfig& launch, unsigned warp_size,
                                     const ResidencyLimits& limits, unsigned sm_count)
{
    if (warp_size == 0 || warp_size > LaneMask::kMaxLanes) throw ConfigError("warp_size", "must be in [1, 64]");
    if (sm_count == 0) throw ConfigError("sm_count", "must be positive");
    kisa::validate_launch(launch, limits.max_threads_per_sm);
    const std::uint32_t block_threads = launch.block_threads();
    const std::uint32_t capacity = resident_block_capacity(block_threads, limits);
    if (capacity == 0) throw ConfigError("max_ctas_per_sm", "must be positive");

    std::vector<SmLaunchPlan> plans(sm_count);
    std::vector<std::uint32_t> next_id(sm_count, 0);
    for (std::uint32_t b = 0; b < launch.block_count(); ++b) {
        const unsigned sm = b % sm_count;
        auto& plan = plans[sm];
        if (plan.resident_blocks.size() < capacity) {
            plan.resident_blocks.push_back(b);
            auto warps = make_block_warps(b, block_threads, warp_size, next_id[sm]);
            plan.warps.insert(plan.warps.end(), warps.begin(), warps.end());
        } else {
            plan.queued_blocks.push_back(b);
        }
    }
    return plans;
}

} // namespace warpsim::simt
