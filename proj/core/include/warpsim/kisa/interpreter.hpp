#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "warpsim/kisa/isa.hpp"
#include "warpsim/kisa/memory.hpp"

namespace warpsim::kisa {

struct ReferenceOptions {
    std::uint64_t step_budget = 1'000'000; // per thread
    bool record_traces = false;
};

struct ReferenceResult {
    MemoryImage memory;
    // Indexed by global thread id = ctaid * ntid + tid.
    std::vector<std::uint64_t> instruction_counts;
    // Executed pcs per thread, only when record_traces is set.
    std::vector<std::vector<std::uint32_t>> traces;

    std::uint64_t total_instructions() const;
};

// Runs every thread to completion one after another in global thread-id
// order. bar.sync is a no-op. Only meaningful for race-free kernels.
ReferenceResult reference_execute(const Program& program, const LaunchConfig& launch,
                                  MemoryImage memory, const ReferenceOptions& options = {});

} // namespace warpsim::kisa
