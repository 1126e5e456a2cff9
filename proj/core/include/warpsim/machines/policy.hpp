#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "warpsim/machines/config.hpp"
#include "warpsim/simt/pipeline.hpp"
#include "warpsim/simt/warp.hpp"

namespace warpsim::machines {

simt::IssueRule issue_rule(MachineModel model);

unsigned issue_cost(const simt::WarpContext& warp, const MachineConfig& config);
unsigned issue_cost(unsigned active_lanes, const MachineConfig& config);

// Applies a divergent branch outcome. Baseline and SW+ serialize through the
// reconvergence stack and return nothing. LW+ keeps the taken lanes in `warp`
// and returns a new, immediately schedulable split for the fall-through lanes.
std::optional<simt::WarpContext> on_divergence(const MachineConfig& config, simt::WarpContext& warp,
                                               const simt::ControlOutcome& outcome, std::size_t reconv_pc,
                                               std::uint32_t new_warp_id);

// Whether `split` may issue now. Under PerInstruction sync a split waits
// until no live sibling (same root warp, not parked at a barrier) has
// completed fewer instructions than it has. `split` itself may appear among
// the siblings.
bool lw_sync_gate(const simt::WarpContext& split, std::span<const simt::WarpContext* const> siblings,
                  LwSyncMode mode);

} // namespace warpsim::machines
