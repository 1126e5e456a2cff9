#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "warpsim/kisa/isa.hpp"
#include "warpsim/kisa/memory.hpp"

namespace warpsim::kisa {

struct ThreadState {
    std::array<std::uint32_t, kRegisterCount> regs{};
    std::array<bool, kPredicateCount> preds{};
    std::uint32_t tid = 0;
    std::uint32_t ctaid = 0;
    std::uint32_t ntid = 0;
};

// Effect of one instruction on one thread.
struct LaneEffect {
    // Branch outcome for bra; always true for the unconditional form.
    bool taken = false;
    // Effective address for loads and stores.
    std::optional<std::uint32_t> address;
};

// Thrown by execute_lane for out-of-range or misaligned addresses. Callers
// rethrow with thread/warp context.
struct AddressFault {
    std::uint64_t address;
};

// Applies insn to one thread: registers, predicates and memory are updated in
// place. Control flow is left to the caller.
LaneEffect execute_lane(const Instruction& insn, ThreadState& thread, MemoryImage& memory);

} // namespace warpsim::kisa
