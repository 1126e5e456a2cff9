#include <gtest/gtest.h>

#include "warpsim/error.hpp"
#include "warpsim/kisa/parser.hpp"
#include "warpsim/simt/executor.hpp"
#include "warpsim/simt/formation.hpp"
#include "warpsim/simt/pipeline.hpp"
#include "warpsim/simt/scheduler.hpp"
#include "warpsim/simt/warp.hpp"

using namespace warpsim;
using namespace warpsim::simt;

namespace {

std::vector<kisa::ThreadState> threads(unsigned n)
{
    std::vector<kisa::ThreadState> t(n);
    for (unsigned i = 0; i < n; ++i) {
        t[i].tid = i;
        t[i].ntid = n;
    }
    return t;
}

} // namespace

TEST(Formation, PacksConsecutiveThreadsIntoWarps)
{
    auto shapes = block_warp_shapes(256, 32);
    EXPECT_EQ(shapes.size(), 8u);
    shapes = block_warp_shapes(100, 32);
    ASSERT_EQ(shapes.size(), 4u);
    EXPECT_EQ(shapes[3].first_thread, 96u);
    EXPECT_EQ(shapes[3].lanes, 4u);
    EXPECT_EQ(block_warp_shapes(256, 64).size(), 4u); // (16,16,1)
}

TEST(Formation, RespectsResidencyLimitsAndQueues)
{
    kisa::LaunchConfig launch;
    launch.grid = {12, 1, 1};
    launch.block = {256, 1, 1};
    const auto plans = form_warps(launch, 32, {8, 1024}, 2);
    ASSERT_EQ(plans.size(), 2u);
    // 6 blocks per SM, 4 fit (1024 threads / 256).
    EXPECT_EQ(plans[0].resident_blocks, (std::vector<std::uint32_t>{0, 2, 4, 6}));
    EXPECT_EQ(plans[0].queued_blocks.size(), 2u);
    EXPECT_EQ(plans[1].warps.size(), 32u);
    EXPECT_EQ(plans[1].warps.front().block_id(), 1u);

    launch.block = {2048, 1, 1};
    EXPECT_THROW(form_warps(launch, 32, {8, 1024}, 1), ConfigError);
}

TEST(IssueCost, SimdWastesSlotsMimdDoesNot)
{
    EXPECT_EQ(issue_cost(32, 32, 8, IssueRule::Simd), 4u);
    EXPECT_EQ(issue_cost(5, 32, 8, IssueRule::Simd), 4u);
    EXPECT_EQ(issue_cost(5, 64, 8, IssueRule::Mimd), 1u);
    EXPECT_EQ(issue_cost(17, 64, 8, IssueRule::Mimd), 3u);
}

TEST(ReconvStack, DivergencePushesFallThroughThenTaken)
{
    WarpContext w(0, 0, 0, 8);
    w.advance(3); // at the branch B = 3
    apply_divergence(w, LaneMask(0xF0), LaneMask(0x0F), 10, 4, 20);
    ASSERT_EQ(w.stack().size(), 3u);
    EXPECT_EQ(w.stack()[0], (ReconvEntry{kNoReconv, 20, LaneMask(0xFF)}));
    EXPECT_EQ(w.stack()[1], (ReconvEntry{20, 4, LaneMask(0x0F)}));
    EXPECT_EQ(w.stack()[2], (ReconvEntry{20, 10, LaneMask(0xF0)}));
    EXPECT_EQ(w.active(), LaneMask(0xF0));

    // Taken side reaches D and pops; the fall-through side runs, then pops too.
    w.advance(20);
    EXPECT_EQ(w.pc(), 4u);
    EXPECT_EQ(w.active(), LaneMask(0x0F));
    w.advance(20);
    EXPECT_EQ(w.stack().size(), 1u);
    EXPECT_EQ(w.active(), LaneMask(0xFF));
    EXPECT_EQ(w.pc(), 20u);
}

TEST(ReconvStack, NestedDivergenceKeepsMasksNested)
{
    WarpContext w(0, 0, 0, 8);
    apply_divergence(w, LaneMask(0xF0), LaneMask(0x0F), 10, 1, 30);
    apply_divergence(w, LaneMask(0xC0), LaneMask(0x30), 12, 11, 20);
    EXPECT_EQ(w.stack().size(), 5u);
    EXPECT_TRUE(masks_nested(w));
    EXPECT_EQ(w.active(), LaneMask(0xC0));
}

TEST(ReconvStack, UniformOutcomeNeverPushes)
{
    WarpContext w(0, 0, 0, 8);
    ControlOutcome o;
    o.kind = ControlKind::BranchUniform;
    o.pc = 2;
    o.target = 7;
    w.issue(0, o, 24);
    complete_instruction(w, o);
    EXPECT_EQ(w.stack().size(), 1u);
    EXPECT_EQ(w.pc(), 7u);
    EXPECT_EQ(w.state(), WarpState::Ready);
    EXPECT_EQ(w.epoch(), 1u);
}

TEST(ReconvStack, ExitDoneOnlyWhenNoLanesRemain)
{
    WarpContext w(0, 0, 0, 8);
    apply_divergence(w, LaneMask(0x0F), LaneMask(0xF0), 5, 1, 9);
    w.exit_lanes(w.active());
    EXPECT_FALSE(w.done());
    EXPECT_EQ(w.active(), LaneMask(0xF0));
    w.exit_lanes(w.active());
    EXPECT_TRUE(w.done());
}

TEST(Executor, BranchOutcomesAndMaskedSetp)
{
    const auto p = kisa::parse_program("and r1, r0, 4\nsetp.ne p0, r1, 0\nbra p0, T\nT: exit\n");
    auto t = threads(8);
    for (unsigned i = 0; i < 8; ++i) t[i].regs[0] = i;
    kisa::MemoryImage mem(1024);
    WarpContext w(0, 0, 0, 8);
    execute_warp_instruction(w, p.at(0), t, mem);
    // Run setp on lanes 0-5 only: lanes 6 and 7 keep their predicate.
    t[6].preds[0] = false;
    t[7].preds[0] = true;
    apply_divergence(w, LaneMask(0x3F), LaneMask(0xC0), 1, 1, 3);
    execute_warp_instruction(w, p.at(1), t, mem);
    EXPECT_FALSE(t[6].preds[0]);
    EXPECT_TRUE(t[7].preds[0]);
    EXPECT_TRUE(t[4].preds[0]);

    WarpContext full(1, 0, 0, 8);
    for (unsigned i = 0; i < 8; ++i) t[i].preds[0] = i >= 4;
    auto exec = execute_warp_instruction(full, p.at(2), t, mem);
    EXPECT_EQ(exec.control.kind, ControlKind::BranchDivergent);
    EXPECT_EQ(exec.control.taken, LaneMask(0xF0));
    EXPECT_EQ(exec.control.fall_through, LaneMask(0x0F));

    for (auto& th : t) th.preds[0] = true;
    EXPECT_EQ(execute_warp_instruction(full, p.at(2), t, mem).control.kind, ControlKind::BranchUniform);
    for (auto& th : t) th.preds[0] = false;
    EXPECT_EQ(execute_warp_instruction(full, p.at(2), t, mem).control.kind, ControlKind::Advance);
}

TEST(Executor, MemoryAccessesAndFaults)
{
    const auto p = kisa::parse_program("ld.global r1, [r0+4]\nexit\n");
    auto t = threads(4);
    for (unsigned i = 0; i < 4; ++i) t[i].regs[0] = 64 * i;
    kisa::MemoryImage mem(256);
    WarpContext w(3, 1, 0, 4);
    auto exec = execute_warp_instruction(w, p.at(0), t, mem);
    ASSERT_EQ(exec.accesses.size(), 4u);
    EXPECT_EQ(exec.accesses[2].address, 132u);
    EXPECT_FALSE(exec.accesses[2].is_write);

    t[2].regs[0] = 4096;
    try {
        execute_warp_instruction(w, p.at(0), t, mem);
        FAIL();
    } catch (const ExecutionFault& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("warp 3"), std::string::npos);
        EXPECT_NE(msg.find("lane 2"), std::string::npos);
        EXPECT_NE(msg.find("0x1004"), std::string::npos);
    }
}

TEST(Scheduler, LooseRoundRobin)
{
    std::vector<WarpContext> pool;
    for (std::uint32_t i = 0; i < 4; ++i) pool.emplace_back(i, 0, 8 * i, 8);
    RoundRobinScheduler rr;
    PipelineModel pipe;
    std::vector<std::size_t> order;
    for (std::uint64_t c = 0; order.size() < 6; ++c) {
        auto t = scheduler_tick(std::span<const WarpContext>(pool), rr, pipe, c, [](std::size_t) { return true; });
        if (t.kind == TickKind::Issued) {
            order.push_back(t.warp_index);
            pipe.occupy(c, 1);
        }
    }
    EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2, 3, 0, 1}));

    // Warp 0 in flight, warp 1 ready -> warp 1.
    RoundRobinScheduler fresh;
    PipelineModel idle_pipe;
    pool[0].issue(0, {}, 24);
    auto t = scheduler_tick(std::span<const WarpContext>(pool).first(2), fresh, idle_pipe, 1, [](std::size_t) { return true; });
    EXPECT_EQ(t.kind, TickKind::Issued);
    EXPECT_EQ(t.warp_index, 1u);

    pool[1].issue(1, {}, 25);
    t = scheduler_tick(std::span<const WarpContext>(pool).first(2), fresh, idle_pipe, 2, [](std::size_t) { return true; });
    EXPECT_EQ(t.kind, TickKind::Idle);

    idle_pipe.occupy(2, 4);
    t = scheduler_tick(std::span<const WarpContext>(pool).first(2), fresh, idle_pipe, 3, [](std::size_t) { return true; });
    EXPECT_EQ(t.kind, TickKind::Busy);
}

TEST(Barrier, ReleasesOnlyWhenEveryLiveWarpArrives)
{
    std::vector<WarpContext> block;
    for (std::uint32_t i = 0; i < 3; ++i) block.emplace_back(i, 0, 8 * i, 8);
    std::vector<WarpContext*> ptrs{&block[0], &block[1], &block[2]};
    block[0].set_state(WarpState::AtBarrier);
    block[1].set_state(WarpState::AtBarrier);
    EXPECT_FALSE(barrier_release(ptrs));
    block[2].exit_lanes(block[2].active());
    EXPECT_TRUE(barrier_release(ptrs));
    EXPECT_EQ(block[0].state(), WarpState::Ready);
    EXPECT_EQ(block[1].state(), WarpState::Ready);
    EXPECT_TRUE(block[2].done());
}
