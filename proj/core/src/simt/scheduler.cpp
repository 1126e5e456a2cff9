#include "warpsim/simt/scheduler.hpp"

namespace warpsim::simt {

bool barrier_release(std::span<WarpContext* const> block_warps)
{
    bool any_waiting = false;
    for (const WarpContext* w : block_warps) {
        if (w->done()) continue;
        if (w->state() != WarpState::AtBarrier) return false;
        any_waiting = true;
    }
    if (!any_waiting) return false;
    for (WarpContext* w : block_warps) {
        if (!w->done()) w->set_state(WarpState::Ready);
    }
    return true;
}

} // namespace warpsim::simt
