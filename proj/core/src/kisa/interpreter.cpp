#include "warpsim/kisa/interpreter.hpp"

#include <numeric>
#include <sstream>

#include "warpsim/error.hpp"
#include "warpsim/kisa/semantics.hpp"

namespace warpsim::kisa {

std::uint64_t ReferenceResult::total_instructions() const
{
    return std::accumulate(instruction_counts.begin(), instruction_counts.end(), std::uint64_t{0});
}

ReferenceResult reference_execute(const Program& program, const LaunchConfig& launch, MemoryImage memory,
                                  const ReferenceOptions& options)
{
    validate_launch(launch);
    const std::uint32_t ntid = launch.block_threads();
    const std::uint64_t threads = launch.total_threads();

    ReferenceResult result{std::move(memory), std::vector<std::uint64_t>(threads, 0), {}};
    if (options.record_traces) result.traces.resize(threads);

    for (std::uint64_t gid = 0; gid < threads; ++gid) {
        ThreadState t;
        t.ctaid = static_cast<std::uint32_t>(gid / ntid);
        t.tid = static_cast<std::uint32_t>(gid % ntid);
        t.ntid = ntid;

        std::size_t pc = 0;
        std::uint64_t steps = 0;
        while (true) {
            if (pc >= program.size()) {
                throw ExecutionFault("thread " + std::to_string(gid) + " ran past the end of the program");
            }
            if (steps >= options.step_budget) {
                throw ExecutionFault("thread " + std::to_string(gid) + " exceeded the step budget of " +
                                     std::to_string(options.step_budget) + " (divergence or livelock)");
            }
            const Instruction& insn = program.instructions[pc];
            ++steps;
            if (options.record_traces) result.traces[gid].push_back(static_cast<std::uint32_t>(pc));

            LaneEffect effect;
            try {
                effect = execute_lane(insn, t, result.memory);
            } catch (const AddressFault& f) {
                std::ostringstream msg;
                msg << "thread " << gid << " accessed invalid address 0x" << std::hex << f.address << std::dec
                    << " at instruction " << pc;
                throw ExecutionFault(msg.str());
            }
            if (insn.opcode == Opcode::Exit) break;
            pc = (insn.opcode == Opcode::Bra && effect.taken) ? *insn.branch_target : pc + 1;
        }
        result.instruction_counts[gid] = steps;
    }
    return result;
}

} // namespace warpsim::kisa
