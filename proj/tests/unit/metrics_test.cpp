#include <gtest/gtest.h>

#include <regex>

#include "warpsim/error.hpp"
#include "warpsim/machines/config.hpp"
#include "warpsim/metrics/report.hpp"

using namespace warpsim;
using namespace warpsim::metrics;

namespace {

RunRecord record(std::string kernel, unsigned warp, std::uint64_t cycles, std::uint64_t committed)
{
    RunRecord r;
    r.kernel = std::move(kernel);
    machines::MachineOverrides o;
    o.warp_size = warp;
    r.config = machines::configure_machine(machines::MachineModel::Baseline, o);
    r.stats.total_cycles = cycles;
    r.stats.committed_scalar_instructions = committed;
    r.stats.sm_idle_cycles = {cycles / 4};
    r.stats.sm_busy_cycles = {cycles - cycles / 4};
    r.stats.idle_cycles = cycles / 4;
    return r;
}

std::size_t count(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

} // namespace

TEST(Metrics, Arithmetic)
{
    SimStats s;
    s.offchip_reads = 200;
    s.offchip_writes = 50;
    s.scalar_memory_instructions = 100;
    EXPECT_DOUBLE_EQ(*coalescing_rate(s), 2.5);

    s.total_cycles = 100;
    s.sm_idle_cycles = {40};
    s.idle_cycles = 40;
    EXPECT_DOUBLE_EQ(*idle_share(s), 0.40);
    EXPECT_DOUBLE_EQ(*idle_share(s, 0), 0.40);

    s.total_cycles = 600;
    s.committed_scalar_instructions = 4800;
    EXPECT_DOUBLE_EQ(*ipc(s), 8.0);

    s.simd_slots_issued = 80;
    s.active_slots = 40;
    EXPECT_DOUBLE_EQ(*simd_efficiency(s), 0.5);
}

TEST(Metrics, UndefinedRatiosAreAbsent)
{
    SimStats s;
    EXPECT_FALSE(coalescing_rate(s));
    EXPECT_FALSE(idle_share(s));
    EXPECT_FALSE(ipc(s));
    EXPECT_FALSE(simd_efficiency(s));
}

TEST(Csv, HeaderOnlyForNoRuns)
{
    const std::string csv = emit_csv({});
    EXPECT_EQ(csv, csv_header() + "\n");
    EXPECT_EQ(parse_csv(csv).size(), 1u);
    EXPECT_EQ(csv_columns().front(), "kernel");
    EXPECT_EQ(csv_columns()[18], "coalescing_rate");
}

TEST(Csv, RoundTripRecoversCounters)
{
    auto a = record("tree,\"quoted\"", 16, 1234, 5678);
    a.stats.offchip_reads = 11;
    a.stats.offchip_writes = 7;
    a.stats.merged_reads = 3;
    a.stats.l1_hits = 2;
    a.stats.l1_misses = 14;
    a.stats.scalar_memory_instructions = 90;
    a.stats.simd_slots_issued = 800;
    a.stats.active_slots = 640;
    a.stats.splits_created = 5;
    auto b = record("copy", 32, 10, 0);
    b.error = "boom";
    const auto rows = parse_csv(emit_csv({a, b}));
    ASSERT_EQ(rows.size(), 3u);
    const auto& h = rows[0];
    auto col = [&](const std::vector<std::string>& row, const std::string& name) {
        return row.at(std::find(h.begin(), h.end(), name) - h.begin());
    };
    EXPECT_EQ(col(rows[1], "kernel"), a.kernel);
    EXPECT_EQ(col(rows[1], "total_cycles"), "1234");
    EXPECT_EQ(col(rows[1], "offchip_requests"), "18");
    EXPECT_EQ(col(rows[1], "merged_reads"), "3");
    EXPECT_EQ(col(rows[1], "l1_misses"), "14");
    EXPECT_EQ(col(rows[1], "splits_created"), "5");
    EXPECT_EQ(col(rows[1], "simd_efficiency"), "0.800000");
    // coalescing rate recomputed from the raw columns matches the printed value.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f",
                  std::stod(col(rows[1], "offchip_requests")) / std::stod(col(rows[1], "scalar_mem_insns")));
    EXPECT_EQ(col(rows[1], "coalescing_rate"), buf);
    EXPECT_EQ(col(rows[2], "error"), "boom");
    EXPECT_EQ(col(rows[2], "coalescing_rate"), "");
}

TEST(Chart, SelfNormalizationGivesOne)
{
    std::vector<RunRecord> runs;
    for (const char* k : {"a", "b", "c"}) {
        for (unsigned w : {8u, 16u, 32u, 64u}) runs.push_back(record(k, w, 100 * w, 400 + w));
    }
    const std::string svg = emit_chart(runs, ChartMetric::Ipc, std::string("Baseline-32"));
    EXPECT_EQ(count(svg, "<rect class=\"bar\""), 12u);
    EXPECT_EQ(count(svg, "baseline-32 1.000000</title>"), 3u);
    EXPECT_NE(svg.find("<svg"), std::string::npos);

    const std::string idle = emit_chart(runs, ChartMetric::IdleShare, std::nullopt);
    EXPECT_EQ(count(idle, " 0.250000</title>"), 12u);
}

TEST(Chart, MissingTargetIsAnErrorNamingIt)
{
    std::vector<RunRecord> runs{record("a", 8, 100, 10)};
    try {
        emit_chart(runs, ChartMetric::Ipc, std::string("swplus-8"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("swplus-8"), std::string::npos);
    }
    EXPECT_THROW(emit_chart({}, ChartMetric::Ipc, std::nullopt), Error);
    EXPECT_THROW(parse_chart_metric("speed"), Error);
}
