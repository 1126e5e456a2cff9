#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "warpsim/lane_mask.hpp"
#include "warpsim/memsys/access.hpp"

namespace warpsim::memsys {

struct Requester {
    unsigned sm = 0;
    std::uint32_t warp = 0;
    std::uint64_t seq = 0; // per-SM memory instruction sequence number

    bool operator==(const Requester&) const = default;
};

struct MemoryTransaction {
    std::uint32_t segment_addr = 0; // multiple of kSegmentBytes
    bool is_write = false;
    Requester requester;
    LaneMask lanes_served;
    std::uint64_t issue_cycle = 0;
    std::uint64_t complete_cycle = 0;
};

// One transaction per distinct 64-byte segment touched by the accesses,
// ordered by segment address. All accesses of one instruction share a
// direction; mixed input is split by direction.
std::vector<MemoryTransaction> coalesce_warp_access(std::span<const LaneAccess> accesses);

} // namespace warpsim::memsys
