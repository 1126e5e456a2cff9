#include "warpsim/kisa/semantics.hpp"

namespace warpsim::kisa {
namespace {

std::uint32_t read(const Operand& op, const ThreadState& t)
{
    switch (op.kind) {
    case Operand::Kind::Reg: return t.regs[op.value];
    case Operand::Kind::Imm: return static_cast<std::uint32_t>(op.value);
    case Operand::Kind::Pred: return t.preds[op.value] ? 1u : 0u;
    case Operand::Kind::Special:
        switch (static_cast<Special>(op.value)) {
        case Special::Tid: return t.tid;
        case Special::Ctaid: return t.ctaid;
        case Special::Ntid: return t.ntid;
        }
    }
    return 0;
}

std::uint32_t effective_address(const Instruction& insn, const ThreadState& t, const MemoryImage& memory)
{
    const std::uint64_t addr = std::uint64_t{t.regs[insn.srcs[0].value]} + static_cast<std::int64_t>(insn.mem_offset);
    // Offsets wrap in 32 bits, the same as register arithmetic.
    const std::uint64_t wrapped = addr & 0xFFFFFFFFull;
    if (!memory.valid_word(wrapped)) throw AddressFault{wrapped};
    return static_cast<std::uint32_t>(wrapped);
}

} // namespace

LaneEffect execute_lane(const Instruction& insn, ThreadState& t, MemoryImage& memory)
{
    LaneEffect effect;
    switch (insn.opcode) {
    case Opcode::Mov:
        t.regs[insn.dst->value] = read(insn.srcs[0], t);
        break;
    case Opcode::Add:
        t.regs[insn.dst->value] = read(insn.srcs[0], t) + read(insn.srcs[1], t);
        break;
    case Opcode::Sub:
        t.regs[insn.dst->value] = read(insn.srcs[0], t) - read(insn.srcs[1], t);
        break;
    case Opcode::Mul:
        t.regs[insn.dst->value] = read(insn.srcs[0], t) * read(insn.srcs[1], t);
        break;
    case Opcode::And:
        t.regs[insn.dst->value] = read(insn.srcs[0], t) & read(insn.srcs[1], t);
        break;
    case Opcode::Shr:
        t.regs[insn.dst->value] = read(insn.srcs[0], t) >> (read(insn.srcs[1], t) & 31u);
        break;
    case Opcode::Setp: {
        const auto a = static_cast<std::int32_t>(read(insn.srcs[0], t));
        const auto b = static_cast<std::int32_t>(read(insn.srcs[1], t));
        bool result = false;
        switch (insn.cmp) {
        case CmpOp::Eq: result = a == b; break;
        case CmpOp::Ne: result = a != b; break;
        case CmpOp::Lt: result = a < b; break;
        case CmpOp::Ge: result = a >= b; break;
        }
        t.preds[insn.dst->value] = result;
        break;
    }
    case Opcode::Bra:
        effect.taken = insn.srcs.empty() || t.preds[insn.srcs[0].value];
        break;
    case Opcode::LdGlobal: {
        const std::uint32_t addr = effective_address(insn, t, memory);
        t.regs[insn.dst->value] = memory.load32(addr);
        effect.address = addr;
        break;
    }
    case Opcode::StGlobal: {
        const std::uint32_t addr = effective_address(insn, t, memory);
        memory.store32(addr, t.regs[insn.srcs[1].value]);
        effect.address = addr;
        break;
    }
    case Opcode::BarSync:
    case Opcode::Exit:
        break;
    }
    return effect;
}

} // namespace warpsim::kisa
