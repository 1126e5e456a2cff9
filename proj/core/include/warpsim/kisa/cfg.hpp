#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "warpsim/kisa/isa.hpp"

namespace warpsim::kisa {

struct BasicBlock {
    std::size_t start = 0; // first instruction index
    std::size_t end = 0;   // one past the last instruction
};

struct Cfg {
    std::vector<BasicBlock> blocks;
    std::vector<std::vector<std::size_t>> successors;
    std::vector<std::vector<std::size_t>> predecessors;
    std::vector<std::size_t> block_of; // instruction index -> block id

    std::size_t size() const { return blocks.size(); }
    std::size_t edge_count() const;
    // Blocks with no successors.
    std::vector<std::size_t> exit_blocks() const;
};

inline constexpr std::size_t kNoBlock = static_cast<std::size_t>(-1);

struct IpdomTable {
    // ipdom[b] == kNoBlock for the exit block and for blocks that cannot reach it.
    std::vector<std::size_t> ipdom;

    std::optional<std::size_t> of(std::size_t block) const
    {
        if (ipdom.at(block) == kNoBlock) return std::nullopt;
        return ipdom[block];
    }
};

// Splits the program into basic blocks and connects them. Throws
// ValidationError if control can fall off the end of the program or if some
// block reachable from the entry can never reach an EXIT.
Cfg build_cfg(const Program& program);

// Immediate post-dominators via iterative dataflow on the reverse CFG.
// Throws ValidationError unless the CFG has exactly one exit block.
IpdomTable compute_ipdom(const Cfg& cfg);

// Everything the timing model needs to know about control flow: for each
// instruction index, the reconvergence pc used when a branch there diverges.
struct KernelAnalysis {
    Cfg cfg;
    IpdomTable ipdom;
    std::vector<std::size_t> reconv_pc; // kNoBlock for non-branch instructions

    static KernelAnalysis of(const Program& program);
};

// Human-readable dump used by `warpsim ipdom`.
std::string describe(const Program& program, const Cfg& cfg, const IpdomTable& table);

} // namespace warpsim::kisa
