#pragma once

#include <cstdint>

namespace warpsim::memsys {

inline constexpr std::uint32_t kSegmentBytes = 64;

// One lane's 4-byte global access as produced by the SIMT executor.
struct LaneAccess {
    unsigned lane = 0;
    std::uint32_t address = 0;
    bool is_write = false;
};

inline constexpr std::uint32_t segment_of(std::uint32_t address) { return address & ~(kSegmentBytes - 1); }

} // namespace warpsim::memsys
