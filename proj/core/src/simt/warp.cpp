#include "warpsim/simt/warp.hpp"

#include <sstream>

namespace warpsim::simt {

WarpContext::WarpContext(std::uint32_t warp_id, std::uint32_t block_id, std::uint32_t first_thread, unsigned lanes)
    : warp_id_(warp_id), block_id_(block_id), first_thread_(first_thread), populated_(LaneMask::first(lanes))
{
    stack_.push_back({kNoReconv, 0, populated_});
}

void WarpContext::advance(std::size_t next_pc)
{
    stack_.back().next_pc = next_pc;
    while (stack_.size() > 1 && stack_.back().next_pc == stack_.back().reconv_pc) stack_.pop_back();
}

void WarpContext::exit_lanes(LaneMask lanes)
{
    for (auto& e : stack_) e.mask = e.mask - lanes;
    while (!stack_.empty() && stack_.back().mask.empty()) stack_.pop_back();
    if (stack_.empty()) state_ = WarpState::Done;
}

WarpContext WarpContext::split(std::uint32_t new_warp_id, LaneMask lanes, std::size_t pc)
{
    WarpContext child(*this);
    child.warp_id_ = new_warp_id;
    child.split_of_ = root_id();
    child.stack_.assign(1, {kNoReconv, pc, lanes});
    stack_.back().mask = stack_.back().mask - lanes;
    return child;
}

void WarpContext::issue(std::uint64_t cycle, const ControlOutcome& outcome, std::uint64_t ready_at)
{
    state_ = WarpState::InFlight;
    issue_cycle_ = cycle;
    pending_ = outcome;
    ready_at_ = ready_at;
}

std::string WarpContext::describe() const
{
    static constexpr const char* kStates[] = {"ready", "in-flight", "at-barrier", "done"};
    std::ostringstream out;
    out << "warp " << warp_id_ << " (block " << block_id_;
    if (split_of_) out << ", split of " << *split_of_;
    out << ") " << kStates[static_cast<int>(state_)];
    if (!stack_.empty()) {
        out << " pc=" << pc() << " mask=0x" << std::hex << active().bits() << std::dec << " depth=" << stack_.size();
    }
    if (state_ == WarpState::InFlight) {
        out << " issued@" << issue_cycle_ << " ready@";
        if (ready_at_ == kNever) out << "memory";
        else out << ready_at_;
    }
    return out.str();
}

void apply_divergence(WarpContext& warp, LaneMask taken_mask, LaneMask ft_mask, std::size_t taken_pc,
                      std::size_t ft_pc, std::size_t reconv_pc)
{
    auto& stack = warp.mutable_stack();
    if (stack.size() > 1 && stack.back().reconv_pc == reconv_pc) {
        // Nested divergence reconverging at the same point: the current entry
        // would be popped on arrival anyway, so reuse it for the fall-through side.
        stack.back() = {reconv_pc, ft_pc, ft_mask};
    } else {
        stack.back().next_pc = reconv_pc;
        stack.push_back({reconv_pc, ft_pc, ft_mask});
    }
    stack.push_back({reconv_pc, taken_pc, taken_mask});
    // A side that starts at the reconvergence point has nothing to run.
    while (stack.size() > 1 && stack.back().next_pc == stack.back().reconv_pc) stack.pop_back();
}

void complete_instruction(WarpContext& warp, const ControlOutcome& outcome)
{
    warp.bump_epoch();
    switch (outcome.kind) {
    case ControlKind::Advance:
        warp.advance(outcome.pc + 1);
        warp.set_state(WarpState::Ready);
        break;
    case ControlKind::BranchUniform:
        warp.advance(outcome.target);
        warp.set_state(WarpState::Ready);
        break;
    case ControlKind::Barrier:
        warp.advance(outcome.pc + 1);
        warp.set_state(WarpState::AtBarrier);
        break;
    case ControlKind::Exit:
        warp.exit_lanes(warp.active());
        if (!warp.done()) warp.set_state(WarpState::Ready);
        break;
    case ControlKind::BranchDivergent:
        // Stack already updated by the divergence policy.
        warp.set_state(WarpState::Ready);
        break;
    }
}

bool masks_nested(const WarpContext& warp)
{
    // Entries sharing a reconvergence pc are siblings: disjoint, and together
    // within the entry beneath them.
    const auto& stack = warp.stack();
    LaneMask parent = warp.populated();
    std::size_t i = 0;
    while (i < stack.size()) {
        LaneMask group;
        std::size_t j = i;
        for (; j < stack.size() && stack[j].reconv_pc == stack[i].reconv_pc; ++j) {
            if (stack[j].mask.empty() || !stack[j].mask.disjoint(group)) return false;
            group |= stack[j].mask;
        }
        if (!group.subset_of(parent)) return false;
        parent = stack[j - 1].mask;
        i = j;
    }
    return true;
}

} // namespace warpsim::simt
