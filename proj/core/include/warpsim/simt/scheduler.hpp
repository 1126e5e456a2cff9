#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "warpsim/simt/pipeline.hpp"
#include "warpsim/simt/warp.hpp"

namespace warpsim::simt {

// Loose round-robin: scanning starts one past the last issued position.
class RoundRobinScheduler {
public:
    template <typename ReadyFn>
    std::optional<std::size_t> pick(std::size_t pool_size, ReadyFn&& ready) const
    {
        for (std::size_t i = 0; i < pool_size; ++i) {
            const std::size_t idx = (start_ + i) % pool_size;
            if (ready(idx)) return idx;
        }
        return std::nullopt;
    }

    void issued(std::size_t index) { start_ = index + 1; }

    // Keeps the scan position stable when pool[index] is erased.
    void erased(std::size_t index)
    {
        if (index < start_) --start_;
    }

    std::size_t next_position() const { return start_; }

private:
    std::size_t start_ = 0;
};

enum class TickKind { Busy, Issued, Idle };

struct TickResult {
    TickKind kind = TickKind::Idle;
    std::size_t warp_index = 0;
};

// One scheduler cycle for one SM: busy while the issue slot is occupied,
// otherwise picks the next Ready warp accepted by can_issue, or records idle.
template <typename CanIssueFn>
TickResult scheduler_tick(std::span<const WarpContext> pool, RoundRobinScheduler& rr, const PipelineModel& pipe,
                          std::uint64_t cycle, CanIssueFn&& can_issue)
{
    if (!pipe.slot_free(cycle)) return {TickKind::Busy, 0};
    auto pick = rr.pick(pool.size(), [&](std::size_t i) {
        return pool[i].state() == WarpState::Ready && can_issue(i);
    });
    if (!pick) return {TickKind::Idle, 0};
    rr.issued(*pick);
    return {TickKind::Issued, *pick};
}

// Releases the block's barrier when every live warp has arrived. Returns true
// if a release happened.
bool barrier_release(std::span<WarpContext* const> block_warps);

} // namespace warpsim::simt
