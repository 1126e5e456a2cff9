#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "warpsim/lane_mask.hpp"

namespace warpsim::simt {

inline constexpr std::size_t kNoReconv = std::numeric_limits<std::size_t>::max();
inline constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

struct ReconvEntry {
    std::size_t reconv_pc = kNoReconv;
    std::size_t next_pc = 0;
    LaneMask mask;

    bool operator==(const ReconvEntry&) const = default;
};

enum class WarpState { Ready, InFlight, AtBarrier, Done };

enum class ControlKind { Advance, BranchUniform, BranchDivergent, Barrier, Exit };

// What a warp instruction decided about control flow. Applied when the
// instruction completes.
struct ControlOutcome {
    ControlKind kind = ControlKind::Advance;
    std::size_t pc = 0;     // pc of the instruction that produced this outcome
    std::size_t target = 0; // branch target
    LaneMask taken;
    LaneMask fall_through;
};

class WarpContext {
public:
    WarpContext(std::uint32_t warp_id, std::uint32_t block_id, std::uint32_t first_thread, unsigned lanes);

    std::uint32_t warp_id() const { return warp_id_; }
    std::uint32_t block_id() const { return block_id_; }
    // Index within the block of the thread on lane 0.
    std::uint32_t first_thread() const { return first_thread_; }
    LaneMask populated() const { return populated_; }

    // The original warp this context was split from (LW+), if any. Root id is
    // shared by every split of one original warp.
    std::optional<std::uint32_t> split_of() const { return split_of_; }
    std::uint32_t root_id() const { return split_of_.value_or(warp_id_); }

    const std::vector<ReconvEntry>& stack() const { return stack_; }
    LaneMask active() const { return stack_.empty() ? LaneMask{} : stack_.back().mask; }
    std::size_t pc() const { return stack_.back().next_pc; }

    WarpState state() const { return state_; }
    bool done() const { return state_ == WarpState::Done; }

    // Moves the top entry to next_pc and pops every entry that has arrived
    // at its reconvergence point.
    void advance(std::size_t next_pc);

    // Removes lanes from every stack level; finishes the warp once none remain.
    void exit_lanes(LaneMask lanes);

    // Splits off the given lanes into a new context with its own pc and no
    // reconvergence entry; this context keeps the remaining active lanes.
    WarpContext split(std::uint32_t new_warp_id, LaneMask lanes, std::size_t pc);

    // Scheduling state.
    void issue(std::uint64_t cycle, const ControlOutcome& outcome, std::uint64_t ready_at);
    void set_ready_at(std::uint64_t cycle) { ready_at_ = cycle; }
    std::uint64_t ready_at() const { return ready_at_; }
    std::uint64_t issue_cycle() const { return issue_cycle_; }
    const ControlOutcome& pending() const { return pending_; }
    void set_state(WarpState s) { state_ = s; }

    // Count of completed instructions; LW+ per-instruction sync compares these.
    std::uint64_t epoch() const { return epoch_; }
    void bump_epoch() { ++epoch_; }

    std::vector<ReconvEntry>& mutable_stack() { return stack_; }

    std::string describe() const;

private:
    std::uint32_t warp_id_;
    std::uint32_t block_id_;
    std::uint32_t first_thread_;
    LaneMask populated_;
    std::optional<std::uint32_t> split_of_;
    std::vector<ReconvEntry> stack_;
    WarpState state_ = WarpState::Ready;
    ControlOutcome pending_;
    std::uint64_t issue_cycle_ = 0;
    std::uint64_t ready_at_ = 0;
    std::uint64_t epoch_ = 0;
};

// Pushes the two sides of a divergent branch. The top entry is redirected to
// reconv_pc, then the fall-through and taken sides are pushed so the taken
// side runs first. When the top entry already reconverges at reconv_pc it is
// replaced instead of nested.
void apply_divergence(WarpContext& warp, LaneMask taken_mask, LaneMask ft_mask, std::size_t taken_pc,
                      std::size_t ft_pc, std::size_t reconv_pc);

// Applies a finished instruction's control outcome. Divergent outcomes must
// have been routed through the machine's divergence policy first.
void complete_instruction(WarpContext& warp, const ControlOutcome& outcome);

// True when every stack entry is nonempty, entries sharing a reconvergence pc
// are disjoint, and each such group lies within the entry below it (the bottom
// within the populated lanes).
bool masks_nested(const WarpContext& warp);

} // namespace warpsim::simt
