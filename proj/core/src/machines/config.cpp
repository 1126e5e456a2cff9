#include "warpsim/machines/config.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "warpsim/error.hpp"
#include "warpsim/lane_mask.hpp"
#include "warpsim/memsys/access.hpp"

namespace warpsim::machines {
namespace {

constexpr unsigned kLwWarpFactor = 8;

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src)
{
    if (src) dst = src;
}

} // namespace

std::string MachineConfig::label() const
{
    std::string name(model_name(model));
    if (model == MachineModel::LwPlus && lw_sync_mode == LwSyncMode::FreeRunning) name += "-free";
    return name;
}

void MachineOverrides::merge(const MachineOverrides& o)
{
    take(warp_size, o.warp_size);
    take(simd_width, o.simd_width);
    take(pipeline_depth, o.pipeline_depth);
    take(sm_count, o.sm_count);
    take(threads_per_sm, o.threads_per_sm);
    take(max_ctas_per_sm, o.max_ctas_per_sm);
    take(l1_size, o.l1_size);
    take(l1_ways, o.l1_ways);
    take(l1_block, o.l1_block);
    take(l1_hit_latency, o.l1_hit_latency);
    take(table_capacity, o.table_capacity);
    take(mem_ctrls, o.mem_ctrls);
    take(dram_latency, o.dram_latency);
    take(dram_service_cycles, o.dram_service_cycles);
    take(lw_sync_mode, o.lw_sync_mode);
    take(rng_seed, o.rng_seed);
    take(memory_bytes, o.memory_bytes);
}

MachineConfig configure_machine(MachineModel model, const MachineOverrides& o)
{
    MachineConfig c;
    c.model = model;
    c.simd_width = o.simd_width.value_or(c.simd_width);
    c.pipeline_depth = o.pipeline_depth.value_or(c.pipeline_depth);
    c.sm_count = o.sm_count.value_or(c.sm_count);
    c.threads_per_sm = o.threads_per_sm.value_or(c.threads_per_sm);
    c.max_ctas_per_sm = o.max_ctas_per_sm.value_or(c.max_ctas_per_sm);
    c.l1.size_bytes = o.l1_size.value_or(c.l1.size_bytes);
    c.l1.ways = o.l1_ways.value_or(c.l1.ways);
    c.l1.block_bytes = o.l1_block.value_or(c.l1.block_bytes);
    c.l1.hit_latency = o.l1_hit_latency.value_or(c.l1.hit_latency);
    c.dram.controllers = o.mem_ctrls.value_or(c.dram.controllers);
    c.dram.fixed_latency = o.dram_latency.value_or(c.dram.fixed_latency);
    c.dram.service_cycles = o.dram_service_cycles.value_or(c.dram.service_cycles);
    c.lw_sync_mode = o.lw_sync_mode.value_or(c.lw_sync_mode);
    c.rng_seed = o.rng_seed.value_or(c.rng_seed);
    c.memory_bytes = o.memory_bytes.value_or(c.memory_bytes);

    if (c.simd_width == 0) throw ConfigError("simd_width", "must be positive");

    auto forced_warp = [&](unsigned required, const char* why) {
        if (o.warp_size && *o.warp_size != required) {
            throw ConfigError("warp_size", std::string(model_name(model)) + " requires warp_size " +
                                               std::to_string(required) + " (" + why + "), got " +
                                               std::to_string(*o.warp_size));
        }
        return required;
    };

    switch (model) {
    case MachineModel::Baseline:
        c.warp_size = o.warp_size.value_or(32);
        c.table_scope = memsys::TableScope::IntraWarpOnly;
        c.table_capacity = o.table_capacity.value_or(kBaselineTableCapacity);
        break;
    case MachineModel::SwPlus:
        c.warp_size = forced_warp(c.simd_width, "warp as wide as the SIMD width");
        c.table_scope = memsys::TableScope::AllThreads;
        if (o.table_capacity) throw ConfigError("table_capacity", "swplus tracks outstanding requests without a limit");
        c.table_capacity = std::nullopt;
        break;
    case MachineModel::LwPlus:
        c.warp_size = forced_warp(kLwWarpFactor * c.simd_width, "warp 8x the SIMD width");
        c.table_scope = memsys::TableScope::IntraWarpOnly;
        c.table_capacity = o.table_capacity.value_or(kBaselineTableCapacity);
        break;
    }
    validate(c);
    return c;
}

void validate(const MachineConfig& c)
{
    auto positive = [](unsigned v, const char* field) {
        if (v == 0) throw ConfigError(field, "must be positive");
    };
    positive(c.simd_width, "simd_width");
    positive(c.warp_size, "warp_size");
    positive(c.pipeline_depth, "pipeline_depth");
    positive(c.sm_count, "sm_count");
    positive(c.threads_per_sm, "threads_per_sm");
    positive(c.max_ctas_per_sm, "max_ctas_per_sm");
    positive(c.dram.controllers, "mem_ctrls");
    if (c.warp_size > LaneMask::kMaxLanes) throw ConfigError("warp_size", "at most 64 lanes are supported");
    if (c.warp_size % c.simd_width != 0) {
        throw ConfigError("warp_size", "must be a positive multiple of simd_width " + std::to_string(c.simd_width));
    }
    if (c.model == MachineModel::Baseline) {
        const unsigned w = c.warp_size;
        if (w != 8 && w != 16 && w != 32 && w != 64) throw ConfigError("warp_size", "baseline supports 8, 16, 32 or 64");
    }
    if (c.l1.block_bytes != memsys::kSegmentBytes) {
        throw ConfigError("l1_block", "cache blocks must match the 64-byte transaction size");
    }
    if (c.l1.ways == 0 || c.l1.size_bytes == 0 || c.l1.size_bytes % (c.l1.ways * c.l1.block_bytes) != 0) {
        throw ConfigError("l1_size", "must be a positive multiple of l1_ways * l1_block");
    }
    if (c.table_capacity && *c.table_capacity == 0) throw ConfigError("table_capacity", "must be positive");
    if (c.memory_bytes < memsys::kSegmentBytes || c.memory_bytes > (std::size_t{1} << 32)) {
        throw ConfigError("mem_size", "must be between 64 bytes and 4 GiB");
    }
}

std::string_view model_name(MachineModel model)
{
    switch (model) {
    case MachineModel::Baseline: return "baseline";
    case MachineModel::SwPlus: return "swplus";
    case MachineModel::LwPlus: return "lwplus";
    }
    return "?";
}

MachineModel parse_model(std::string_view name)
{
    const std::string n = lower(name);
    if (n == "baseline") return MachineModel::Baseline;
    if (n == "swplus" || n == "sw+") return MachineModel::SwPlus;
    if (n == "lwplus" || n == "lw+") return MachineModel::LwPlus;
    throw ConfigError("machine", "unknown machine '" + std::string(name) + "' (baseline, swplus, lwplus)");
}

std::string_view sync_mode_name(LwSyncMode mode)
{
    return mode == LwSyncMode::PerInstruction ? "per_instruction" : "free_running";
}

LwSyncMode parse_sync_mode(std::string_view name)
{
    const std::string n = lower(name);
    if (n == "per_instruction" || n == "perinstruction" || n == "sync") return LwSyncMode::PerInstruction;
    if (n == "free_running" || n == "freerunning" || n == "free") return LwSyncMode::FreeRunning;
    throw ConfigError("lw_sync_mode", "unknown mode '" + std::string(name) + "' (per_instruction, free_running)");
}

} // namespace warpsim::machines
