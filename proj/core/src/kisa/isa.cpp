#include "warpsim/kisa/isa.hpp"

#include <string>

#include "warpsim/error.hpp"

namespace warpsim::kisa {

void validate_launch(const LaunchConfig& launch, std::uint32_t max_threads_per_block)
{
    auto positive = [](const Dim3& d) { return d.x > 0 && d.y > 0 && d.z > 0; };
    if (!positive(launch.grid)) throw ConfigError("grid", "every dimension must be positive");
    if (!positive(launch.block)) throw ConfigError("block", "every dimension must be positive");
    if (launch.block.volume() > max_threads_per_block) {
        throw ConfigError("block", std::to_string(launch.block.volume()) +
                                       " threads exceed the per-SM limit of " +
                                       std::to_string(max_threads_per_block));
    }
}

std::string_view opcode_name(Opcode op)
{
    switch (op) {
    case Opcode::Mov: return "mov";
    case Opcode::Add: return "add";
    case Opcode::Sub: return "sub";
    case Opcode::Mul: return "mul";
    case Opcode::And: return "and";
    case Opcode::Shr: return "shr";
    case Opcode::Setp: return "setp";
    case Opcode::Bra: return "bra";
    case Opcode::LdGlobal: return "ld.global";
    case Opcode::StGlobal: return "st.global";
    case Opcode::BarSync: return "bar.sync";
    case Opcode::Exit: return "exit";
    }
    return "?";
}

std::string_view cmp_name(CmpOp op)
{
    switch (op) {
    case CmpOp::Eq: return "eq";
    case CmpOp::Ne: return "ne";
    case CmpOp::Lt: return "lt";
    case CmpOp::Ge: return "ge";
    }
    return "?";
}

std::string_view special_name(Special s)
{
    switch (s) {
    case Special::Tid: return "%tid";
    case Special::Ctaid: return "%ctaid";
    case Special::Ntid: return "%ntid";
    }
    return "?";
}

} // namespace warpsim::kisa
