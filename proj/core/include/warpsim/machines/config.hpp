#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "warpsim/kisa/memory.hpp"
#include "warpsim/memsys/cache.hpp"
#include "warpsim/memsys/dram.hpp"
#include "warpsim/memsys/request_table.hpp"

namespace warpsim::machines {

enum class MachineModel { Baseline, SwPlus, LwPlus };

enum class LwSyncMode { PerInstruction, FreeRunning };

inline constexpr std::size_t kBaselineTableCapacity = 32;

struct MachineConfig {
    MachineModel model = MachineModel::Baseline;
    unsigned warp_size = 32;
    unsigned simd_width = 8;
    unsigned pipeline_depth = 24;
    unsigned sm_count = 16;
    std::uint32_t threads_per_sm = 1024;
    std::uint32_t max_ctas_per_sm = 8;
    memsys::CacheGeometry l1;
    memsys::TableScope table_scope = memsys::TableScope::IntraWarpOnly;
    std::optional<std::size_t> table_capacity = kBaselineTableCapacity; // nullopt = unlimited
    memsys::DramParams dram;
    LwSyncMode lw_sync_mode = LwSyncMode::PerInstruction;
    std::uint64_t rng_seed = 1;
    std::size_t memory_bytes = kisa::kDefaultMemoryBytes;

    // "baseline", "swplus", "lwplus" or "lwplus-free".
    std::string label() const;
};

// Field overrides applied on top of the model's defaults. Anything left unset
// keeps the default (or the value the model forces).
struct MachineOverrides {
    std::optional<unsigned> warp_size;
    std::optional<unsigned> simd_width;
    std::optional<unsigned> pipeline_depth;
    std::optional<unsigned> sm_count;
    std::optional<std::uint32_t> threads_per_sm;
    std::optional<std::uint32_t> max_ctas_per_sm;
    std::optional<std::uint32_t> l1_size;
    std::optional<std::uint32_t> l1_ways;
    std::optional<std::uint32_t> l1_block;
    std::optional<unsigned> l1_hit_latency;
    std::optional<std::size_t> table_capacity;
    std::optional<unsigned> mem_ctrls;
    std::optional<unsigned> dram_latency;
    std::optional<unsigned> dram_service_cycles;
    std::optional<LwSyncMode> lw_sync_mode;
    std::optional<std::uint64_t> rng_seed;
    std::optional<std::size_t> memory_bytes;

    // Fields set in `other` win.
    void merge(const MachineOverrides& other);
};

// Fully populated and validated configuration for a model. Throws
// ConfigError naming the offending field.
MachineConfig configure_machine(MachineModel model, const MachineOverrides& overrides = {});

void validate(const MachineConfig& config);

std::string_view model_name(MachineModel model);
MachineModel parse_model(std::string_view name);
std::string_view sync_mode_name(LwSyncMode mode);
LwSyncMode parse_sync_mode(std::string_view name);

} // namespace warpsim::machines
