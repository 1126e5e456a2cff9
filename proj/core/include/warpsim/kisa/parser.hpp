#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warpsim/kisa/isa.hpp"

namespace warpsim::kisa {

// Initial contents for a run of 32-bit little-endian words.
struct DataBlock {
    std::uint32_t address = 0;
    std::vector<std::uint32_t> words;

    bool operator==(const DataBlock&) const = default;
};

// A .kisa file: the program plus optional launch geometry and data directives
// (".grid x y z", ".block x y z", ".data ADDR w0 w1 ...").
struct KernelSource {
    Program program;
    std::optional<LaunchConfig> launch;
    std::vector<DataBlock> data;

    bool operator==(const KernelSource&) const = default;
};

// Parses kernel text. Directives are accepted and dropped.
Program parse_program(std::string_view text);

KernelSource parse_kernel(std::string_view text);

// Canonical text form; parse_program(unparse(p)) == p.
std::string unparse(const Program& program);
std::string unparse(const KernelSource& source);

std::string format_instruction(const Instruction& insn);

} // namespace warpsim::kisa
