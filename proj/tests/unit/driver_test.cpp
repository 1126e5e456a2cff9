#include <gtest/gtest.h>

#include "warpsim/driver/generators.hpp"
#include "warpsim/driver/run.hpp"
#include "warpsim/driver/sweep.hpp"
#include "warpsim/error.hpp"
#include "warpsim/kisa/interpreter.hpp"

using namespace warpsim;
using namespace warpsim::driver;

TEST(Generators, DeterministicInClassParamsAndSeed)
{
    for (auto cls : all_classes()) {
        GeneratorSpec spec;
        spec.kind = cls;
        const auto a = generate_kernel(spec, 42);
        const auto b = generate_kernel(spec, 42);
        EXPECT_EQ(a.text, b.text) << class_name(cls);
        EXPECT_EQ(initial_memory(a.source), initial_memory(b.source)) << class_name(cls);
        EXPECT_EQ(parse_class(class_name(cls)), cls);
    }
    GeneratorSpec gather;
    gather.kind = KernelClass::RandomGather;
    EXPECT_NE(generate_kernel(gather, 1).text, generate_kernel(gather, 2).text);
}

TEST(Generators, SpecParsingAndLabels)
{
    const auto spec = parse_generator_spec("divergent_tree:depth=4:bit_base=0");
    EXPECT_EQ(spec.kind, KernelClass::DivergentTree);
    EXPECT_EQ(spec.params.depth, 4u);
    EXPECT_EQ(spec.params.bit_base, 0u);
    EXPECT_EQ(parse_generator_spec(spec.label()).params.depth, 4u);
    EXPECT_TRUE(is_generator_spec("compute_loop"));
    EXPECT_FALSE(is_generator_spec("kernels/foo.kisa"));
    EXPECT_THROW(parse_generator_spec("divergent_tree:depth=6"), ConfigError);
    EXPECT_THROW(parse_generator_spec("compute_loop:colour=3"), ConfigError);
    EXPECT_THROW(parse_generator_spec("nope"), ConfigError);
    EXPECT_THROW(parse_generator_spec("unit_stride_copy:threads=100:block=64"), ConfigError);
}

TEST(Generators, UnitStrideCopyCopies)
{
    GeneratorSpec spec;
    spec.params.threads = 1024;
    spec.params.elements = 1;
    const auto k = generate_kernel(spec, 9);
    const auto mem = initial_memory(k.source);
    const auto out = kisa::reference_execute(k.source.program, *k.source.launch, mem).memory;
    for (std::uint32_t i = 0; i < 1024; ++i) {
        ASSERT_EQ(out.load32(kOutputBase + 4 * i), mem.load32(kInputBase + 4 * i)) << i;
    }
}

TEST(Generators, ComputeLoopNeverTouchesMemoryBeyondItsStore)
{
    RunSpec spec;
    spec.kernel = "compute_loop:threads=256";
    const auto r = run(spec);
    EXPECT_EQ(r.record.stats.offchip_reads, 0u);
    EXPECT_EQ(r.record.stats.l1_misses, 0u);
}

TEST(Settings, ParsesKeysAndNamesBadLines)
{
    const auto s = parse_settings("# table 1\nwarp_size = 16\nl1_size=49152\nmachine=swplus\nlw_sync_mode=free\n");
    EXPECT_EQ(s.overrides.warp_size, 16u);
    EXPECT_EQ(s.overrides.l1_size, 49152u);
    EXPECT_EQ(s.machine, "swplus");
    EXPECT_EQ(s.overrides.lw_sync_mode, machines::LwSyncMode::FreeRunning);
    try {
        parse_settings("warp_size=8\nbogus=1\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_settings("warp_size=eight\n"), ConfigError);
    EXPECT_THROW(parse_machine_selector("tpu"), ConfigError);
}

TEST(Run, SameSpecTwiceGivesIdenticalRows)
{
    RunSpec spec;
    spec.kernel = "mixed:threads=256";
    spec.settings.machine = "lwplus";
    const auto a = run(spec);
    const auto b = run(spec);
    EXPECT_EQ(metrics::csv_row(a.record), metrics::csv_row(b.record));
}

TEST(Run, AllMachinesAgreeOnMemory)
{
    std::vector<kisa::MemoryImage> images;
    for (const char* m : {"baseline", "swplus", "lwplus"}) {
        RunSpec spec;
        spec.kernel = "unit_stride_copy:threads=512";
        spec.settings.machine = m;
        images.push_back(run(spec).result.memory);
    }
    EXPECT_EQ(images[0], images[1]);
    EXPECT_EQ(images[0], images[2]);
}

TEST(Run, MismatchNamesFirstAddress)
{
    kisa::MemoryImage a(256), b(256);
    b.store32(0x40, 7);
    try {
        verify_memory(a, b);
        FAIL();
    } catch (const CorrectnessError& e) {
        EXPECT_NE(std::string(e.what()).find("0x40"), std::string::npos) << e.what();
    }
}

TEST(Sweep, SixKernelsSixPointsIs36Rows)
{
    const auto spec = parse_sweep_spec(
        "kernels = unit_stride_copy:threads=256, broadcast_read:threads=256, random_gather:threads=256\n"
        "kernels = divergent_tree:threads=256, compute_loop:threads=256:iters=4, mixed:threads=256:iters=4\n");
    EXPECT_EQ(expand(spec).size(), 36u);
    const auto rows = sweep(spec, 4);
    ASSERT_EQ(rows.size(), 36u);
    for (const auto& r : rows) EXPECT_EQ(r.error, "") << r.kernel;
    EXPECT_EQ(metrics::series_label(rows[0]), "baseline-8");
    EXPECT_EQ(metrics::series_label(rows[4]), "swplus-8");
    EXPECT_EQ(metrics::series_label(rows[5]), "lwplus-64");
}

TEST(Sweep, ConcurrentAndSerialGiveIdenticalBytes)
{
    const auto spec = parse_sweep_spec("kernels = divergent_tree:threads=512, mixed:threads=512:iters=4\n"
                                       "machines = baseline, swplus, lwplus, lwplus-free\nsm_count = 2\n");
    EXPECT_EQ(metrics::emit_csv(sweep(spec, 1)), metrics::emit_csv(sweep(spec, 8)));
}

TEST(Sweep, FailingPointIsRecordedAndOthersRun)
{
    auto spec = parse_sweep_spec("kernels = compute_loop:threads=256, /no/such/file.kisa\nwarp_sizes = 32\n");
    const auto rows = sweep(spec, 2);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].error, "");
    EXPECT_NE(rows[3].error, "");
    EXPECT_THROW(parse_sweep_spec("warp_size = 32\nkernels = compute_loop\n"), ConfigError);
    EXPECT_THROW(parse_sweep_spec("machines = baseline\n"), ConfigError);
}
