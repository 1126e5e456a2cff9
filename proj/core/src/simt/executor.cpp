#include "warpsim/simt/executor.hpp"

#include <sstream>

#include "warpsim/error.hpp"

namespace warpsim::simt {

WarpExecution execute_warp_instruction(const WarpContext& warp, const kisa::Instruction& insn,
                                       std::span<kisa::ThreadState> block_threads, kisa::MemoryImage& memory)
{
    WarpExecution out;
    out.control.pc = warp.pc();
    const LaneMask active = warp.active();
    const bool memory_op = kisa::is_memory(insn.opcode);
    const bool is_write = insn.opcode == kisa::Opcode::StGlobal;
    if (memory_op) out.accesses.reserve(active.count());

    LaneMask taken;
    active.for_each([&](unsigned lane) {
        kisa::ThreadState& thread = block_threads[warp.first_thread() + lane];
        kisa::LaneEffect effect;
        try {
            effect = kisa::execute_lane(insn, thread, memory);
        } catch (const kisa::AddressFault& f) {
            std::ostringstream msg;
            msg << "warp " << warp.warp_id() << " (block " << warp.block_id() << ") lane " << lane
                << " accessed invalid address 0x" << std::hex << f.address << std::dec << " at pc " << warp.pc();
            throw ExecutionFault(msg.str());
        }
        if (effect.taken) taken.set(lane);
        if (memory_op) out.accesses.push_back({lane, *effect.address, is_write});
    });

    switch (insn.opcode) {
    case kisa::Opcode::Bra:
        out.control.target = *insn.branch_target;
        if (taken == active) {
            out.control.kind = ControlKind::BranchUniform;
        } else if (taken.empty()) {
            out.control.kind = ControlKind::Advance;
        } else {
            out.control.kind = ControlKind::BranchDivergent;
            out.control.taken = taken;
            out.control.fall_through = active - taken;
        }
        break;
    case kisa::Opcode::BarSync: out.control.kind = ControlKind::Barrier; break;
    case kisa::Opcode::Exit: out.control.kind = ControlKind::Exit; break;
    default: out.control.kind = ControlKind::Advance; break;
    }
    return out;
}

} // namespace warpsim::simt
