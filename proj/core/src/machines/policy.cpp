#include "warpsim/machines/policy.hpp"

namespace warpsim::machines {

simt::IssueRule issue_rule(MachineModel model)
{
    return model == MachineModel::LwPlus ? simt::IssueRule::Mimd : simt::IssueRule::Simd;
}

unsigned issue_cost(unsigned active_lanes, const MachineConfig& config)
{
    return simt::issue_cost(active_lanes, config.warp_size, config.simd_width, issue_rule(config.model));
}

unsigned issue_cost(const simt::WarpContext& warp, const MachineConfig& config)
{
    return issue_cost(warp.active().count(), config);
}

std::optional<simt::WarpContext> on_divergence(const MachineConfig& config, simt::WarpContext& warp,
                                               const simt::ControlOutcome& outcome, std::size_t reconv_pc,
                                               std::uint32_t new_warp_id)
{
    if (config.model != MachineModel::LwPlus) {
        simt::apply_divergence(warp, outcome.taken, outcome.fall_through, outcome.target, outcome.pc + 1, reconv_pc);
        return std::nullopt;
    }
    simt::WarpContext ft = warp.split(new_warp_id, outcome.fall_through, outcome.pc + 1);
    warp.advance(outcome.target);
    return ft;
}

bool lw_sync_gate(const simt::WarpContext& split, std::span<const simt::WarpContext* const> siblings,
                  LwSyncMode mode)
{
    if (mode == LwSyncMode::FreeRunning) return true;
    for (const simt::WarpContext* s : siblings) {
        if (s->done() || s->state() == simt::WarpState::AtBarrier) continue;
        if (s->epoch() < split.epoch()) return false;
    }
    return true;
}

} // namespace warpsim::machines
