#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace warpsim::kisa {

inline constexpr unsigned kRegisterCount = 16;
inline constexpr unsigned kPredicateCount = 4;
inline constexpr unsigned kAccessBytes = 4;

enum class Opcode : std::uint8_t {
    Mov,
    Add,
    Sub,
    Mul,
    And,
    Shr,
    Setp,
    Bra,
    LdGlobal,
    StGlobal,
    BarSync,
    Exit,
};

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Ge };

enum class Special : std::uint8_t { Tid, Ctaid, Ntid };

struct Operand {
    enum class Kind : std::uint8_t { Reg, Imm, Special, Pred };

    Kind kind = Kind::Imm;
    std::int32_t value = 0; // register/predicate id, immediate, or Special

    static Operand reg(unsigned id) { return {Kind::Reg, static_cast<std::int32_t>(id)}; }
    static Operand imm(std::int32_t v) { return {Kind::Imm, v}; }
    static Operand special(Special s) { return {Kind::Special, static_cast<std::int32_t>(s)}; }
    static Operand pred(unsigned id) { return {Kind::Pred, static_cast<std::int32_t>(id)}; }

    bool operator==(const Operand&) const = default;
};

// One decoded micro-ISA instruction.
//
// Operand layout by opcode:
//   mov/alu   dst=reg, srcs = value operands
//   setp      dst=pred, srcs = {reg, reg|imm}, cmp set
//   bra       srcs = {pred} or {} for the unconditional form, target set
//   ld.global dst=reg, srcs = {address reg}, mem_offset
//   st.global srcs = {address reg, value reg}, mem_offset
struct Instruction {
    Opcode opcode = Opcode::Exit;
    std::optional<Operand> dst;
    std::vector<Operand> srcs;
    CmpOp cmp = CmpOp::Eq;
    std::optional<std::size_t> branch_target;
    std::string target_label;
    std::int32_t mem_offset = 0;

    bool operator==(const Instruction&) const = default;
};

struct Program {
    std::vector<Instruction> instructions;
    std::map<std::string, std::size_t> labels;

    std::size_t size() const { return instructions.size(); }
    const Instruction& at(std::size_t pc) const { return instructions.at(pc); }

    bool operator==(const Program&) const = default;
};

struct Dim3 {
    std::uint32_t x = 1;
    std::uint32_t y = 1;
    std::uint32_t z = 1;

    std::uint64_t volume() const { return std::uint64_t{x} * y * z; }
    bool operator==(const Dim3&) const = default;
};

struct LaunchConfig {
    Dim3 grid;
    Dim3 block;

    std::uint32_t block_threads() const { return static_cast<std::uint32_t>(block.volume()); }
    std::uint32_t block_count() const { return static_cast<std::uint32_t>(grid.volume()); }
    std::uint64_t total_threads() const { return grid.volume() * block.volume(); }

    bool operator==(const LaunchConfig&) const = default;
};

// Throws ConfigError if either dimension is zero or a block exceeds the
// per-SM thread limit.
void validate_launch(const LaunchConfig& launch, std::uint32_t max_threads_per_block = 1024);

std::string_view opcode_name(Opcode op);
std::string_view cmp_name(CmpOp op);
std::string_view special_name(Special s);

inline bool is_memory(Opcode op) { return op == Opcode::LdGlobal || op == Opcode::StGlobal; }
inline bool is_alu(Opcode op)
{
    return op == Opcode::Mov || op == Opcode::Add || op == Opcode::Sub || op == Opcode::Mul ||
           op == Opcode::And || op == Opcode::Shr || op == Opcode::Setp;
}
inline bool is_unconditional_branch(const Instruction& insn)
{
    return insn.opcode == Opcode::Bra && insn.srcs.empty();
}

} // namespace warpsim::kisa
