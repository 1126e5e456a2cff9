#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "warpsim/kisa/isa.hpp"
#include "warpsim/simt/warp.hpp"

namespace warpsim::simt {

struct ResidencyLimits {
    std::uint32_t max_ctas_per_sm = 8;
    std::uint32_t max_threads_per_sm = 1024;
};

struct WarpShape {
    std::uint32_t first_thread = 0;
    unsigned lanes = 0;
};

// Consecutive linear thread ids of one block packed into warps; the last warp
// may be partial.
std::vector<WarpShape> block_warp_shapes(std::uint32_t block_threads, unsigned warp_size);

// How many blocks of this size one SM can hold at once.
std::uint32_t resident_block_capacity(std::uint32_t block_threads, const ResidencyLimits& limits);

struct SmLaunchPlan {
    std::vector<std::uint32_t> resident_blocks;
    std::deque<std::uint32_t> queued_blocks;
    std::vector<WarpContext> warps; // warps of the resident blocks
};

// Assigns blocks to SMs round-robin by block id and forms the warps of the
// blocks that fit immediately. Warp ids are unique per SM and assigned in
// order starting from 0.
std::vector<SmLaunchPlan> form_warps(const kisa::LaunchConfig& launch, unsigned warp_size,
                                     const ResidencyLimits& limits, unsigned sm_count);

// Builds the warps for one block, numbering them from next_warp_id.
std::vector<WarpContext> make_block_warps(std::uint32_t block_id, std::uint32_t block_threads,
                                          unsigned warp_size, std::uint32_t& next_warp_id);

} // namespace warpsim::simt
