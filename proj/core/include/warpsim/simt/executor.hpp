#pragma once

#include <span>
#include <vector>

#include "warpsim/kisa/isa.hpp"
#include "warpsim/kisa/memory.hpp"
#include "warpsim/kisa/semantics.hpp"
#include "warpsim/memsys/access.hpp"
#include "warpsim/simt/warp.hpp"

namespace warpsim::simt {

struct WarpExecution {
    ControlOutcome control;
    std::vector<memsys::LaneAccess> accesses; // memory opcodes only
};

// Executes insn on every active lane of warp. block_threads holds the
// register state of the warp's block; lane l uses block_threads[first_thread + l].
// Throws ExecutionFault naming warp, lane and address on a bad access.
WarpExecution execute_warp_instruction(const WarpContext& warp, const kisa::Instruction& insn,
                                       std::span<kisa::ThreadState> block_threads, kisa::MemoryImage& memory);

} // namespace warpsim::simt
