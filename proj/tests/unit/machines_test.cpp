#include <gtest/gtest.h>

#include "warpsim/error.hpp"
#include "warpsim/machines/config.hpp"
#include "warpsim/machines/policy.hpp"

using namespace warpsim;
using namespace warpsim::machines;

namespace {

std::string config_error_field(MachineModel model, const MachineOverrides& o)
{
    try {
        configure_machine(model, o);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

} // namespace

TEST(Configure, ModelDefaults)
{
    const auto base = configure_machine(MachineModel::Baseline);
    EXPECT_EQ(base.warp_size, 32u);
    EXPECT_EQ(base.simd_width, 8u);
    EXPECT_EQ(base.pipeline_depth, 24u);
    EXPECT_EQ(base.table_capacity, kBaselineTableCapacity);
    EXPECT_EQ(base.l1.sets(), 96u);
    EXPECT_EQ(base.dram.controllers, 6u);
    EXPECT_EQ(base.dram.fixed_latency, 400u);

    const auto sw = configure_machine(MachineModel::SwPlus);
    EXPECT_EQ(sw.warp_size, 8u);
    EXPECT_EQ(sw.table_scope, memsys::TableScope::AllThreads);
    EXPECT_FALSE(sw.table_capacity);

    EXPECT_EQ(configure_machine(MachineModel::LwPlus).warp_size, 64u);
    // 8 x 16 lanes exceeds what a lane mask can hold.
    MachineOverrides w16;
    w16.simd_width = 16;
    EXPECT_THROW(configure_machine(MachineModel::LwPlus, w16), ConfigError);
}

TEST(Configure, RejectsInvalidCombinations)
{
    MachineOverrides o;
    o.warp_size = 12;
    EXPECT_EQ(config_error_field(MachineModel::Baseline, o), "warp_size");
    o.warp_size = 32;
    EXPECT_EQ(config_error_field(MachineModel::SwPlus, o), "warp_size");
    EXPECT_EQ(config_error_field(MachineModel::LwPlus, o), "warp_size");
    o.warp_size = 128;
    EXPECT_EQ(config_error_field(MachineModel::Baseline, o), "warp_size");

    MachineOverrides t;
    t.table_capacity = 4;
    EXPECT_EQ(config_error_field(MachineModel::SwPlus, t), "table_capacity");
    MachineOverrides z;
    z.simd_width = 0;
    EXPECT_EQ(config_error_field(MachineModel::Baseline, z), "simd_width");
}

TEST(Policy, IssueCostPerModel)
{
    auto base = configure_machine(MachineModel::Baseline);
    auto lw = configure_machine(MachineModel::LwPlus);
    EXPECT_EQ(issue_cost(3, base), 4u);
    EXPECT_EQ(issue_cost(3, lw), 1u);
    EXPECT_EQ(issue_cost(64, lw), 8u);
}

TEST(Policy, BaselineDivergencePushesLwPlusSplits)
{
    simt::ControlOutcome o;
    o.kind = simt::ControlKind::BranchDivergent;
    o.pc = 3;
    o.target = 10;
    o.taken = LaneMask(0xF0);
    o.fall_through = LaneMask(0x0F);

    const auto base = configure_machine(MachineModel::Baseline);
    simt::WarpContext w(0, 0, 0, 8);
    EXPECT_FALSE(on_divergence(base, w, o, 20, 99));
    EXPECT_EQ(w.stack().size(), 3u);
    EXPECT_EQ(w.pc(), 10u);

    const auto lw = configure_machine(MachineModel::LwPlus);
    simt::WarpContext parent(0, 0, 0, 8);
    auto child = on_divergence(lw, parent, o, 20, 7);
    ASSERT_TRUE(child);
    EXPECT_EQ(parent.active(), LaneMask(0xF0));
    EXPECT_EQ(parent.pc(), 10u);
    EXPECT_EQ(child->active(), LaneMask(0x0F));
    EXPECT_EQ(child->pc(), 4u);
    EXPECT_EQ(child->warp_id(), 7u);
    EXPECT_EQ(child->root_id(), 0u);
    EXPECT_EQ(parent.stack().size(), 1u);
    EXPECT_TRUE(parent.active().disjoint(child->active()));
}

TEST(Policy, SyncGateWaitsForLaggingSiblings)
{
    simt::WarpContext a(0, 0, 0, 8);
    simt::WarpContext b(1, 0, 0, 8);
    a.bump_epoch();
    std::vector<const simt::WarpContext*> sibs{&a, &b};
    EXPECT_FALSE(lw_sync_gate(a, sibs, LwSyncMode::PerInstruction));
    EXPECT_TRUE(lw_sync_gate(b, sibs, LwSyncMode::PerInstruction));
    EXPECT_TRUE(lw_sync_gate(a, sibs, LwSyncMode::FreeRunning));
    b.set_state(simt::WarpState::AtBarrier);
    EXPECT_TRUE(lw_sync_gate(a, sibs, LwSyncMode::PerInstruction));
    b.set_state(simt::WarpState::Ready);
    b.exit_lanes(b.active());
    EXPECT_TRUE(lw_sync_gate(a, sibs, LwSyncMode::PerInstruction));
}

TEST(Configure, NamesRoundTrip)
{
    for (auto m : {MachineModel::Baseline, MachineModel::SwPlus, MachineModel::LwPlus}) {
        EXPECT_EQ(parse_model(model_name(m)), m);
    }
    for (auto s : {LwSyncMode::PerInstruction, LwSyncMode::FreeRunning}) {
        EXPECT_EQ(parse_sync_mode(sync_mode_name(s)), s);
    }
    EXPECT_THROW(parse_model("gpu"), ConfigError);
}
