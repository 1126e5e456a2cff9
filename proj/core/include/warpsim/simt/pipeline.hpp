#pragma once

#include <cstdint>

namespace warpsim::simt {

enum class IssueRule {
    Simd, // every lane slot of the warp is occupied, active or not
    Mimd, // only active lanes consume issue bandwidth
};

// Cycles the issue stage is occupied by one warp instruction.
unsigned issue_cost(unsigned active_lanes, unsigned warp_size, unsigned simd_width, IssueRule rule);

struct PipelineModel {
    unsigned depth = 24;
    unsigned width = 8;
    std::uint64_t issue_busy_until = 0;

    bool slot_free(std::uint64_t cycle) const { return cycle >= issue_busy_until; }
    void occupy(std::uint64_t cycle, unsigned cost) { issue_busy_until = cycle + cost; }
};

} // namespace warpsim::simt
