#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "warpsim/driver/generators.hpp"
#include "warpsim/error.hpp"
#include "warpsim/kisa/cfg.hpp"
#include "warpsim/kisa/interpreter.hpp"
#include "warpsim/kisa/parser.hpp"

using namespace warpsim;
using namespace warpsim::kisa;

namespace {

const char* kDiamond = R"(
    mov r0, %tid
    and r1, r0, 1
    setp.eq p0, r1, 0
    bra p0, EVEN
    add r2, r2, 5
    bra JOIN
EVEN:
    add r2, r2, 7
JOIN:
    exit
)";

ParseError parse_error(std::string_view text)
{
    try {
        parse_program(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no parse error for: " << text;
    return ParseError(0, 0, "");
}

} // namespace

TEST(Parser, DecodesOperandsAndResolvesLabels)
{
    const Program p = parse_program(kDiamond);
    ASSERT_EQ(p.size(), 8u);
    EXPECT_EQ(p.at(0).opcode, Opcode::Mov);
    EXPECT_EQ(p.at(0).srcs.at(0), Operand::special(Special::Tid));
    EXPECT_EQ(p.at(2).opcode, Opcode::Setp);
    EXPECT_EQ(p.at(2).cmp, CmpOp::Eq);
    EXPECT_EQ(p.at(2).dst, Operand::pred(0));
    EXPECT_EQ(p.at(3).branch_target, 6u);
    EXPECT_EQ(p.at(5).branch_target, 7u);
    EXPECT_TRUE(is_unconditional_branch(p.at(5)));
    EXPECT_EQ(p.labels.at("JOIN"), 7u);
}

TEST(Parser, MemoryOperandsAndHexImmediates)
{
    const Program p = parse_program("ld.global r1, [r2+0x40]\nst.global [r3], r1\nmov r4, 0xFFFFFFFF\nexit\n");
    EXPECT_EQ(p.at(0).mem_offset, 64);
    EXPECT_EQ(p.at(0).srcs.at(0), Operand::reg(2));
    EXPECT_EQ(p.at(1).srcs.size(), 2u);
    EXPECT_EQ(p.at(2).srcs.at(0), Operand::imm(-1));
}

TEST(Parser, ErrorsCarryLocation)
{
    auto e = parse_error("mov r0, 1\n  frob r1, r2\nexit\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("unknown opcode"), std::string::npos);

    e = parse_error("bra p0, NOWHERE\nexit\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("undefined label"), std::string::npos);

    e = parse_error("exit\nadd r16, r0, r1\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);

    e = parse_error("A: exit\nA: exit\n");
    EXPECT_EQ(e.line(), 2u);

    e = parse_error("setp.eq p4, r0, 0\nexit\n");
    EXPECT_NE(std::string(e.what()).find("predicate"), std::string::npos);

    e = parse_error("mov r0, 1,\nexit\n");
    EXPECT_EQ(e.line(), 1u);
}

TEST(Parser, DirectivesAndDataMerging)
{
    const KernelSource k = parse_kernel(".grid 4 1 1\n.block 16 2 1\n.data 0x100 1 2\n.data 0x108 3\nexit\n");
    ASSERT_TRUE(k.launch);
    EXPECT_EQ(k.launch->block_count(), 4u);
    EXPECT_EQ(k.launch->block_threads(), 32u);
    ASSERT_EQ(k.data.size(), 1u);
    EXPECT_EQ(k.data[0].words, (std::vector<std::uint32_t>{1, 2, 3}));
}

TEST(Parser, UnparseIsAFixpointForEveryGenerator)
{
    for (auto cls : driver::all_classes()) {
        driver::GeneratorSpec spec;
        spec.kind = cls;
        spec.params.threads = 64;
        spec.params.block = 32;
        const auto k = driver::generate_kernel(spec, 5);
        const std::string once = unparse(k.source);
        const KernelSource again = parse_kernel(once);
        EXPECT_EQ(again, k.source) << driver::class_name(cls);
        EXPECT_EQ(unparse(again), once) << driver::class_name(cls);
    }
}

TEST(Cfg, DiamondBlocksAndIpdom)
{
    const Program p = parse_program(kDiamond);
    const auto a = KernelAnalysis::of(p);
    // B0 [0,3], B1 [4,5], B2 [6], B3 [7]
    ASSERT_EQ(a.cfg.size(), 4u);
    EXPECT_EQ(a.cfg.successors[0], (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(a.cfg.successors[1], (std::vector<std::size_t>{3}));
    EXPECT_EQ(a.ipdom.of(0), 3u);
    EXPECT_EQ(a.ipdom.of(1), 3u);
    EXPECT_FALSE(a.ipdom.of(3));
    EXPECT_EQ(a.reconv_pc[3], 7u);
}

TEST(Cfg, LoopReconvergesAfterTheBackEdge)
{
    const Program p = parse_program("mov r1, 0\nL: add r1, r1, 1\nsetp.lt p0, r1, 4\nbra p0, L\nexit\n");
    const auto a = KernelAnalysis::of(p);
    EXPECT_EQ(a.reconv_pc[3], 4u);
}

TEST(Cfg, RejectsFallOffAndMultipleExitsAndDeadEnds)
{
    EXPECT_THROW(build_cfg(parse_program("mov r0, 1\n")), ValidationError);
    EXPECT_THROW(KernelAnalysis::of(parse_program("setp.eq p0, r0, 0\nbra p0, A\nexit\nA: exit\n")), ValidationError);
    EXPECT_THROW(build_cfg(parse_program("setp.eq p0, r0, 0\nbra p0, X\nexit\nX: bra X\n")), ValidationError);
}

TEST(Cfg, IpdomMatchesPathEnumerationOnRandomGraphs)
{
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 200; ++i) {
        const Cfg cfg = oracles::random_cfg(rng, 10);
        const IpdomTable table = compute_ipdom(cfg);
        EXPECT_EQ(table.ipdom, oracles::brute_force_ipdom(cfg)) << "graph " << i;
    }
}

TEST(Interpreter, ExecutesDiamondPerThread)
{
    const Program p = parse_program("mov r0, %tid\nand r1, r0, 1\nsetp.eq p0, r1, 0\nbra p0, EVEN\nadd r2, r2, 5\n"
                                    "bra JOIN\nEVEN: add r2, r2, 7\nJOIN: mul r3, r0, 4\nst.global [r3+256], r2\nexit\n");
    LaunchConfig launch;
    launch.block = {4, 1, 1};
    ReferenceOptions opt;
    opt.record_traces = true;
    const auto r = reference_execute(p, launch, MemoryImage(4096), opt);
    EXPECT_EQ(r.memory.load32(256), 7u);
    EXPECT_EQ(r.memory.load32(260), 5u);
    EXPECT_EQ(r.instruction_counts, (std::vector<std::uint64_t>{8, 9, 8, 9}));
    EXPECT_EQ(r.traces[0], (std::vector<std::uint32_t>{0, 1, 2, 3, 6, 7, 8, 9}));
    EXPECT_EQ(r.total_instructions(), 34u);
}

TEST(Interpreter, SpecialsAndArithmetic)
{
    const Program p = parse_program("mov r0, %ctaid\nmov r1, %ntid\nmov r2, %tid\nmul r3, r0, r1\nadd r3, r3, r2\n"
                                    "sub r4, r3, 10\nshr r5, r4, 28\nmul r6, r3, 4\nst.global [r6], r5\nexit\n");
    LaunchConfig launch;
    launch.grid = {2, 1, 1};
    launch.block = {8, 1, 1};
    const auto r = reference_execute(p, launch, MemoryImage(4096));
    // gid 3: 3-10 wraps to 0xFFFFFFF9, logical shift right by 28 = 15.
    EXPECT_EQ(r.memory.load32(12), 15u);
    // gid 12: 2 >> 28 = 0.
    EXPECT_EQ(r.memory.load32(48), 0u);
}

TEST(Interpreter, FaultsOnInvalidAccess)
{
    LaunchConfig launch;
    EXPECT_THROW(reference_execute(parse_program("mov r0, 4096\nld.global r1, [r0]\nexit\n"), launch, MemoryImage(4096)),
                 ExecutionFault);
    EXPECT_THROW(reference_execute(parse_program("mov r0, 2\nld.global r1, [r0]\nexit\n"), launch, MemoryImage(4096)),
                 ExecutionFault);
}

TEST(Interpreter, StepBudgetStopsRunawayThreads)
{
    LaunchConfig launch;
    ReferenceOptions opt;
    opt.step_budget = 1000;
    const Program p = parse_program("setp.eq p0, r0, r0\nL: bra p0, L\nexit\n");
    EXPECT_THROW(reference_execute(p, launch, MemoryImage(4096), opt), ExecutionFault);
}

TEST(Memory, LittleEndianWordsAndDataBlocks)
{
    MemoryImage m(256);
    m.store32(8, 0x11223344);
    EXPECT_EQ(m.bytes()[8], 0x44);
    EXPECT_EQ(m.load32(8), 0x11223344u);
    EXPECT_FALSE(m.valid_word(254));
    EXPECT_FALSE(m.valid_word(6));
    EXPECT_THROW(m.apply({{252, {1, 2}}}), ConfigError);
    MemoryImage other(256);
    EXPECT_EQ(m.first_difference(other), 8u);
}
