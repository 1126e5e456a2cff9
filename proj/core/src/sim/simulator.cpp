#include "warpsim/sim/simulator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "warpsim/error.hpp"
#include "warpsim/machines/policy.hpp"
#include "warpsim/memsys/cache.hpp"
#include "warpsim/memsys/coalescer.hpp"
#include "warpsim/memsys/dram.hpp"
#include "warpsim/memsys/request_table.hpp"
#include "warpsim/simt/executor.hpp"
#include "warpsim/simt/formation.hpp"
#include "warpsim/simt/scheduler.hpp"

namespace warpsim::sim {
namespace {

using machines::MachineModel;
using simt::WarpContext;
using simt::WarpState;

// One issued memory instruction, possibly shared by several LW+ splits.
struct MemOp {
    std::vector<std::uint32_t> warps;
    unsigned outstanding = 0;
    std::uint64_t floor = 0;  // issue + pipeline depth
    std::uint64_t latest = 0; // latest transaction completion so far
};

struct StalledRequest {
    std::uint32_t segment = 0;
    bool is_write = false;
    std::uint64_t op = 0;
};

struct SmState {
    SmState(unsigned idx, const machines::MachineConfig& config)
        : index(idx), cache(config.l1), table(config.table_scope, config.table_capacity)
    {
        pipe.depth = config.pipeline_depth;
        pipe.width = config.simd_width;
    }

    unsigned index;
    simt::PipelineModel pipe;
    simt::RoundRobinScheduler rr;
    std::vector<WarpContext> pool;
    std::unordered_map<std::uint32_t, std::size_t> slot_of; // warp id -> pool index
    memsys::L1Cache cache;
    memsys::RequestTable table;
    std::deque<StalledRequest> stalled;
    std::deque<std::uint32_t> queued_blocks;
    std::map<std::uint32_t, unsigned> live_contexts; // per resident block
    std::map<std::uint32_t, LaneMask> exited;         // per root warp
    std::uint32_t next_warp_id = 0;
    std::uint64_t next_op = 0;
    std::unordered_map<std::uint64_t, MemOp> ops;
    std::uint64_t busy = 0;
    std::uint64_t idle = 0;

    void reindex()
    {
        slot_of.clear();
        for (std::size_t i = 0; i < pool.size(); ++i) slot_of[pool[i].warp_id()] = i;
    }

    WarpContext& warp(std::uint32_t id) { return pool[slot_of.at(id)]; }

    bool finished() const { return live_contexts.empty() && queued_blocks.empty(); }
};

class Simulation {
public:
    Simulation(const kisa::Program& program, const kisa::KernelAnalysis& analysis, const kisa::LaunchConfig& launch,
               kisa::MemoryImage memory, const machines::MachineConfig& config, const SimOptions& options)
        : program_(program),
          analysis_(analysis),
          launch_(launch),
          config_(config),
          options_(options),
          memory_(std::move(memory)),
          dram_(config.dram),
          block_threads_(launch.block_count())
    {
        machines::validate(config);
        if (program.size() == 0) throw ValidationError("empty program");
        const simt::ResidencyLimits limits{config.max_ctas_per_sm, config.threads_per_sm};
        auto plans = simt::form_warps(launch, config.warp_size, limits, config.sm_count);
        sms_.reserve(config.sm_count);
        for (unsigned s = 0; s < config.sm_count; ++s) {
            sms_.emplace_back(s, config);
            SmState& sm = sms_.back();
            sm.pool = std::move(plans[s].warps);
            sm.queued_blocks = std::move(plans[s].queued_blocks);
            for (const auto& w : sm.pool) ++sm.live_contexts[w.block_id()];
            for (std::uint32_t b : plans[s].resident_blocks) init_block_threads(b);
            sm.next_warp_id = static_cast<std::uint32_t>(sm.pool.size());
            sm.reindex();
        }
        stats_.sm_idle_cycles.assign(config.sm_count, 0);
        stats_.sm_busy_cycles.assign(config.sm_count, 0);
        if (options.record_traces) traces_.resize(launch.total_threads());
        stats_.max_stack_depth = 1;
    }

    SimResult run()
    {
        std::uint64_t cycle = 0;
        for (;;) {
            deliver_dram(cycle);
            for (auto& sm : sms_) drain_stalled(sm, cycle);
            for (auto& sm : sms_) complete_warps(sm, cycle);
            if (all_done(cycle)) break;
            if (cycle >= options_.cycle_budget) throw ExecutionFault(deadlock_report(cycle));

            bool any_activity = false;
            for (auto& sm : sms_) {
                const auto tick = issue(sm, cycle);
                if (tick == simt::TickKind::Idle) {
                    ++sm.idle;
                } else {
                    ++sm.busy;
                    any_activity = true;
                }
            }
            if (!any_activity) {
                // Nothing can change until the next completion; account the
                // gap as idle on every SM in one step.
                const std::uint64_t next = std::min(next_event(cycle), options_.cycle_budget);
                if (next > cycle + 1) {
                    for (auto& sm : sms_) sm.idle += next - cycle - 1;
                    cycle = next;
                    continue;
                }
            }
            ++cycle;
        }

        stats_.total_cycles = cycle;
        for (const auto& sm : sms_) {
            stats_.sm_idle_cycles[sm.index] = sm.idle;
            stats_.sm_busy_cycles[sm.index] = sm.busy;
            stats_.idle_cycles += sm.idle;
        }
        return SimResult{std::move(stats_), std::move(memory_), std::move(traces_)};
    }

private:
    void init_block_threads(std::uint32_t block)
    {
        const std::uint32_t n = launch_.block_threads();
        auto& threads = block_threads_[block];
        threads.assign(n, kisa::ThreadState{});
        for (std::uint32_t t = 0; t < n; ++t) {
            threads[t].tid = t;
            threads[t].ctaid = block;
            threads[t].ntid = n;
        }
    }

    // Off-chip completions: fill L1 on reads, then wake every waiter.
    void deliver_dram(std::uint64_t cycle)
    {
        for (const auto& req : dram_.tick(cycle)) {
            SmState& sm = sms_[req.id % sms_.size()];
            const std::uint64_t entry = req.id / sms_.size();
            auto done = sm.table.complete(entry);
            if (!done.is_write) sm.cache.fill(done.segment_addr);
            for (std::uint64_t op : done.waiters) transaction_done(sm, op, req.complete);
        }
    }

    void transaction_done(SmState& sm, std::uint64_t op_id, std::uint64_t at)
    {
        MemOp& op = sm.ops.at(op_id);
        op.latest = std::max(op.latest, at);
        if (--op.outstanding == 0) finish_op(sm, op_id);
    }

    void finish_op(SmState& sm, std::uint64_t op_id)
    {
        const MemOp& op = sm.ops.at(op_id);
        const std::uint64_t ready = std::max(op.floor, op.latest);
        for (std::uint32_t id : op.warps) sm.warp(id).set_ready_at(ready);
        sm.ops.erase(op_id);
    }

    void send_offchip(SmState& sm, std::uint64_t entry, std::uint32_t segment, std::uint64_t cycle)
    {
        dram_.enqueue(entry * sms_.size() + sm.index, segment, cycle);
    }

    // Returns false when the table is full and the request must wait.
    bool request_offchip(SmState& sm, std::uint32_t segment, bool is_write, std::uint64_t op, std::uint64_t cycle)
    {
        const auto issued = sm.table.issue(segment, is_write, op);
        switch (issued.outcome) {
        case memsys::IssueOutcome::NewOffchip:
            if (is_write) ++stats_.offchip_writes;
            else ++stats_.offchip_reads;
            send_offchip(sm, issued.entry, segment, cycle);
            return true;
        case memsys::IssueOutcome::MergedIntoPending: ++stats_.merged_reads; return true;
        case memsys::IssueOutcome::StalledTableFull: return false;
        }
        return false;
    }

    void drain_stalled(SmState& sm, std::uint64_t cycle)
    {
        while (!sm.stalled.empty()) {
            const StalledRequest r = sm.stalled.front();
            if (!request_offchip(sm, r.segment, r.is_write, r.op, cycle)) break;
            sm.stalled.pop_front();
        }
    }

    void complete_warps(SmState& sm, std::uint64_t cycle)
    {
        bool barrier_pending = false;
        std::vector<std::uint32_t> retired;
        const std::size_t n = sm.pool.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (sm.pool[i].state() != WarpState::InFlight || sm.pool[i].ready_at() > cycle) continue;
            const simt::ControlOutcome outcome = sm.pool[i].pending();
            const LaneMask before = sm.pool[i].active();
            simt::complete_instruction(sm.pool[i], outcome);

            if (outcome.kind == simt::ControlKind::BranchDivergent) {
                ++stats_.divergent_branches;
                const std::size_t reconv = analysis_.reconv_pc.at(outcome.pc);
                auto split = machines::on_divergence(config_, sm.pool[i], outcome, reconv, sm.next_warp_id);
                if (split) {
                    ++sm.next_warp_id;
                    ++stats_.splits_created;
                    ++sm.live_contexts[split->block_id()];
                    sm.slot_of[split->warp_id()] = sm.pool.size();
                    sm.pool.push_back(std::move(*split));
                }
            }

            WarpContext& w = sm.pool[i];
            stats_.max_stack_depth = std::max<std::uint64_t>(stats_.max_stack_depth, w.stack().size());
            if (outcome.kind == simt::ControlKind::Exit) {
                sm.exited[w.root_id()] |= before;
                if (w.done() && --sm.live_contexts[w.block_id()] == 0) retired.push_back(w.block_id());
            }
            if (w.state() == WarpState::AtBarrier) barrier_pending = true;
            if (options_.check_invariants) check_invariants(sm, w);
        }
        if (barrier_pending) release_barriers(sm);
        for (std::uint32_t b : retired) retire_block(sm, b);
    }

    void release_barriers(SmState& sm)
    {
        std::map<std::uint32_t, std::vector<WarpContext*>> by_block;
        for (auto& w : sm.pool) by_block[w.block_id()].push_back(&w);
        for (auto& [block, warps] : by_block) {
            std::optional<std::size_t> barrier_pc;
            bool waiting = false;
            for (const WarpContext* w : warps) {
                if (w->state() != WarpState::AtBarrier) continue;
                waiting = true;
                if (barrier_pc && *barrier_pc != w->pending().pc) {
                    std::ostringstream msg;
                    msg << "block " << block << " reached different barriers (pc " << *barrier_pc << " and pc "
                        << w->pending().pc << "); " << w->describe();
                    throw ExecutionFault(msg.str());
                }
                barrier_pc = w->pending().pc;
            }
            if (waiting) simt::barrier_release(warps);
        }
    }

    void retire_block(SmState& sm, std::uint32_t block)
    {
        sm.live_contexts.erase(block);
        for (std::size_t i = sm.pool.size(); i-- > 0;) {
            if (sm.pool[i].block_id() != block) continue;
            sm.exited.erase(sm.pool[i].root_id());
            sm.pool.erase(sm.pool.begin() + static_cast<std::ptrdiff_t>(i));
            sm.rr.erased(i);
        }
        block_threads_[block].clear();
        block_threads_[block].shrink_to_fit();
        if (!sm.queued_blocks.empty()) {
            const std::uint32_t next = sm.queued_blocks.front();
            sm.queued_blocks.pop_front();
            init_block_threads(next);
            auto warps = simt::make_block_warps(next, launch_.block_threads(), config_.warp_size, sm.next_warp_id);
            sm.live_contexts[next] = static_cast<unsigned>(warps.size());
            for (auto& w : warps) sm.pool.push_back(std::move(w));
        }
        sm.reindex();
    }

    bool sync_gated() const
    {
        return config_.model == MachineModel::LwPlus && config_.lw_sync_mode == machines::LwSyncMode::PerInstruction;
    }

    simt::TickKind issue(SmState& sm, std::uint64_t cycle)
    {
        std::unordered_map<std::uint32_t, std::vector<const WarpContext*>> siblings;
        if (sync_gated()) {
            for (const auto& w : sm.pool) {
                if (!w.done()) siblings[w.root_id()].push_back(&w);
            }
        }
        auto gate = [&](std::size_t i) {
            if (!sync_gated()) return true;
            const WarpContext& w = sm.pool[i];
            return machines::lw_sync_gate(w, siblings[w.root_id()], config_.lw_sync_mode);
        };
        const auto tick = simt::scheduler_tick(std::span<const WarpContext>(sm.pool), sm.rr, sm.pipe, cycle, gate);
        if (tick.kind != simt::TickKind::Issued) return tick.kind;

        const std::size_t lead = tick.warp_index;
        const std::size_t pc = sm.pool[lead].pc();
        const kisa::Instruction& insn = program_.at(pc);

        std::vector<std::size_t> group{lead};
        if (sync_gated() && kisa::is_memory(insn.opcode)) {
            const WarpContext& l = sm.pool[lead];
            for (const WarpContext* s : siblings[l.root_id()]) {
                const std::size_t idx = sm.slot_of.at(s->warp_id());
                if (idx == lead || s->state() != WarpState::Ready || s->pc() != pc || s->epoch() != l.epoch()) {
                    continue;
                }
                if (gate(idx)) group.push_back(idx);
            }
            std::sort(group.begin() + 1, group.end());
        }

        unsigned active_total = 0;
        std::vector<memsys::LaneAccess> accesses;
        std::vector<simt::ControlOutcome> outcomes;
        for (std::size_t idx : group) {
            WarpContext& w = sm.pool[idx];
            if (insn.opcode == kisa::Opcode::BarSync && config_.model != MachineModel::LwPlus &&
                w.stack().size() > 1) {
                std::ostringstream msg;
                msg << "bar.sync under divergence: warp " << w.warp_id() << " (block " << w.block_id() << ") at pc "
                    << pc << " has lanes 0x" << std::hex << w.active().bits() << " of 0x"
                    << w.stack().front().mask.bits() << std::dec << " active";
                throw ExecutionFault(msg.str());
            }
            auto exec = simt::execute_warp_instruction(w, insn, block_threads_[w.block_id()], memory_);
            outcomes.push_back(exec.control);
            accesses.insert(accesses.end(), exec.accesses.begin(), exec.accesses.end());

            const unsigned active = w.active().count();
            active_total += active;
            ++stats_.issued_warp_instructions;
            stats_.committed_scalar_instructions += active;
            stats_.active_slots += active;
            if (kisa::is_memory(insn.opcode)) stats_.scalar_memory_instructions += active;
            if (config_.model != MachineModel::LwPlus) stats_.simd_slots_issued += w.populated().count();
            if (options_.record_traces) {
                const std::uint64_t base = std::uint64_t{w.block_id()} * launch_.block_threads() + w.first_thread();
                w.active().for_each([&](unsigned lane) { traces_[base + lane].push_back(static_cast<std::uint32_t>(pc)); });
            }
        }

        const unsigned cost = machines::issue_cost(active_total, config_);
        if (config_.model == MachineModel::LwPlus) stats_.simd_slots_issued += std::uint64_t{cost} * config_.simd_width;
        sm.pipe.occupy(cycle, cost);

        const std::uint64_t floor = cycle + config_.pipeline_depth;
        if (!kisa::is_memory(insn.opcode)) {
            sm.pool[lead].issue(cycle, outcomes[0], floor);
            return simt::TickKind::Issued;
        }

        const std::uint64_t op_id = sm.next_op++;
        MemOp op;
        op.floor = floor;
        op.latest = floor;
        for (std::size_t k = 0; k < group.size(); ++k) {
            sm.pool[group[k]].issue(cycle, outcomes[k], simt::kNever);
            op.warps.push_back(sm.pool[group[k]].warp_id());
        }
        sm.ops.emplace(op_id, op);
        MemOp& live = sm.ops.at(op_id);

        for (const auto& t : memsys::coalesce_warp_access(accesses)) {
            const auto access = sm.cache.access(t.segment_addr, t.is_write);
            if (t.is_write) {
                ++stats_.write_transactions;
            } else if (access.hit) {
                ++stats_.l1_hits;
                live.latest = std::max(live.latest, cycle + access.latency);
                continue;
            } else {
                ++stats_.l1_misses;
            }
            ++live.outstanding;
            if (!request_offchip(sm, t.segment_addr, t.is_write, op_id, cycle)) {
                sm.stalled.push_back({t.segment_addr, t.is_write, op_id});
            }
        }
        if (live.outstanding == 0) finish_op(sm, op_id);
        return simt::TickKind::Issued;
    }

    bool all_done(std::uint64_t cycle) const
    {
        for (const auto& sm : sms_) {
            if (!sm.finished() || !sm.pipe.slot_free(cycle) || !sm.stalled.empty()) return false;
        }
        return dram_.idle();
    }

    std::uint64_t next_event(std::uint64_t cycle) const
    {
        std::uint64_t next = simt::kNever;
        if (auto d = dram_.next_completion()) next = std::min(next, *d);
        for (const auto& sm : sms_) {
            if (sm.pipe.issue_busy_until > cycle) next = std::min(next, sm.pipe.issue_busy_until);
            for (const auto& w : sm.pool) {
                if (w.state() == WarpState::InFlight && w.ready_at() != simt::kNever) {
                    next = std::min(next, w.ready_at());
                }
            }
        }
        return std::max(next, cycle + 1);
    }

    void check_invariants(SmState& sm, const WarpContext& w)
    {
        if (!w.done() && !simt::masks_nested(w)) throw Error("stack masks not nested: " + w.describe());
        if (config_.model != MachineModel::LwPlus) return;
        LaneMask seen;
        for (const auto& other : sm.pool) {
            if (other.root_id() != w.root_id() || other.done()) continue;
            if (!other.active().disjoint(seen)) throw Error("overlapping LW+ splits: " + other.describe());
            seen |= other.active();
        }
        const LaneMask populated = w.populated();
        if ((seen | sm.exited[w.root_id()]) != populated) {
            throw Error("LW+ splits do not cover warp " + std::to_string(w.root_id()));
        }
    }

    std::string deadlock_report(std::uint64_t cycle) const
    {
        std::ostringstream out;
        out << "cycle budget of " << options_.cycle_budget << " exhausted at cycle " << cycle
            << "; live warps:";
        for (const auto& sm : sms_) {
            for (const auto& w : sm.pool) {
                if (!w.done()) out << "\n  sm " << sm.index << ": " << w.describe();
            }
            if (!sm.stalled.empty()) out << "\n  sm " << sm.index << ": " << sm.stalled.size() << " stalled requests";
        }
        return out.str();
    }

    const kisa::Program& program_;
    const kisa::KernelAnalysis& analysis_;
    kisa::LaunchConfig launch_;
    machines::MachineConfig config_;
    SimOptions options_;
    kisa::MemoryImage memory_;
    memsys::DramModel dram_;
    std::vector<std::vector<kisa::ThreadState>> block_threads_;
    std::vector<SmState> sms_;
    metrics::SimStats stats_;
    std::vector<std::vector<std::uint32_t>> traces_;
};

} // namespace

SimResult simulate(const kisa::Program& program, const kisa::KernelAnalysis& analysis,
                   const kisa::LaunchConfig& launch, kisa::MemoryImage memory, const machines::MachineConfig& config,
                   const SimOptions& options)
{
    Simulation sim(program, analysis, launch, std::move(memory), config, options);
    return sim.run();
}

} // namespace warpsim::sim
