#include "warpsim/memsys/coalescer.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace warpsim::memsys {

std::vector<MemoryTransaction> coalesce_warp_access(std::span<const LaneAccess> accesses)
{
    std::map<std::pair<bool, std::uint32_t>, LaneMask> segments;
    for (const auto& a : accesses) segments[{a.is_write, segment_of(a.address)}].set(a.lane);

    std::vector<MemoryTransaction> out;
    out.reserve(segments.size());
    for (const auto& [key, lanes] : segments) {
        MemoryTransaction t;
        t.is_write = key.first;
        t.segment_addr = key.second;
        t.lanes_served = lanes;
        out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.segment_addr < b.segment_addr; });
    return out;
}

} // namespace warpsim::memsys
