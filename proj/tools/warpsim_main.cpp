#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "warpsim/driver/generators.hpp"
#include "warpsim/driver/run.hpp"
#include "warpsim/driver/sweep.hpp"
#include "warpsim/error.hpp"
#include "warpsim/kisa/cfg.hpp"
#include "warpsim/kisa/interpreter.hpp"
#include "warpsim/metrics/report.hpp"

namespace {

using namespace warpsim;

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw Error("failed writing '" + path + "'");
}

// FNV-1a over the whole image; a compact fingerprint for `oracle`.
std::uint64_t fingerprint(const kisa::MemoryImage& image)
{
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : image.bytes()) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

struct RunArgs {
    std::string kernel;
    std::string config;
    std::string machine;
    std::optional<unsigned> warp_size;
    std::optional<unsigned> simd_width;
    std::optional<unsigned> sm_count;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> cycle_budget;
    bool no_verify = false;
    std::string out;
};

int cmd_run(const RunArgs& a)
{
    driver::RunSpec spec;
    spec.kernel = a.kernel;
    if (!a.config.empty()) spec.settings = driver::load_settings(a.config);
    if (!a.machine.empty()) spec.settings.machine = a.machine;
    if (a.warp_size) spec.settings.overrides.warp_size = a.warp_size;
    if (a.simd_width) spec.settings.overrides.simd_width = a.simd_width;
    if (a.sm_count) spec.settings.overrides.sm_count = a.sm_count;
    if (a.seed) spec.settings.seed = a.seed;
    if (a.cycle_budget) spec.settings.cycle_budget = a.cycle_budget;
    if (a.no_verify) spec.settings.verify = false;

    const auto outcome = driver::run(spec);
    const std::string csv = metrics::emit_csv({outcome.record});
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        write_text(a.out, csv);
        std::cout << outcome.record.kernel << " on " << metrics::series_label(outcome.record) << ": "
                  << outcome.record.stats.total_cycles << " cycles, ipc "
                  << metrics::ipc(outcome.record.stats).value_or(0.0) << '\n';
    }
    return 0;
}

struct SweepArgs {
    std::string spec;
    std::string out;
    std::string chart;
    std::string chart_out;
    std::optional<unsigned> jobs;
};

int cmd_sweep(const SweepArgs& a)
{
    const auto spec = driver::parse_sweep_spec(driver::read_file(a.spec));
    std::optional<metrics::ChartMetric> metric;
    std::optional<std::string> normalize;
    if (!a.chart.empty()) {
        const auto colon = a.chart.find(':');
        metric = metrics::parse_chart_metric(a.chart.substr(0, colon));
        if (colon != std::string::npos) normalize = a.chart.substr(colon + 1);
        if (a.chart_out.empty()) throw ConfigError("chart", "--chart needs -o FILE.svg");
    }

    const auto rows = driver::sweep(spec, a.jobs.value_or(spec.jobs));
    write_text(a.out, metrics::emit_csv(rows));

    int failures = 0;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            ++failures;
            std::cerr << "point failed: " << r.kernel << " on " << metrics::series_label(r) << ": " << r.error << '\n';
        }
    }
    if (metric) write_text(a.chart_out, metrics::emit_chart(rows, *metric, normalize));
    std::cerr << rows.size() << " points, " << failures << " failed\n";
    return failures ? 1 : 0;
}

int cmd_gen(const std::string& cls, std::uint64_t seed, const std::string& out)
{
    const auto spec = driver::parse_generator_spec(cls);
    write_text(out, driver::generate_kernel(spec, seed).text);
    return 0;
}

int cmd_ipdom(const std::string& kernel, std::uint64_t seed)
{
    const auto loaded = driver::load_kernel(kernel, seed);
    const auto analysis = kisa::KernelAnalysis::of(loaded.source.program);
    std::cout << kisa::describe(loaded.source.program, analysis.cfg, analysis.ipdom);
    return 0;
}

int cmd_oracle(const std::string& kernel, std::uint64_t seed, const std::string& words)
{
    const auto loaded = driver::load_kernel(kernel, seed);
    if (!loaded.source.launch) throw ConfigError("launch", "kernel has no .grid/.block directives");
    const auto& launch = *loaded.source.launch;
    auto result = kisa::reference_execute(loaded.source.program, launch, driver::initial_memory(loaded.source));
    std::printf("threads %llu\ninstructions %llu\nmemory_fnv1a 0x%016llx\n",
                static_cast<unsigned long long>(launch.total_threads()),
                static_cast<unsigned long long>(result.total_instructions()),
                static_cast<unsigned long long>(fingerprint(result.memory)));
    if (!words.empty()) {
        const auto colon = words.find(':');
        const std::uint32_t addr = static_cast<std::uint32_t>(std::stoul(words.substr(0, colon), nullptr, 0));
        const unsigned count = colon == std::string::npos ? 1 : static_cast<unsigned>(std::stoul(words.substr(colon + 1)));
        for (unsigned i = 0; i < count; ++i) {
            const std::uint32_t at = addr + 4 * i;
            if (!result.memory.valid_word(at)) throw ConfigError("words", "address out of range");
            std::printf("0x%08x: 0x%08x\n", at, result.memory.load32(at));
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cycle-level SIMT core simulator"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Simulate one kernel on one machine and emit a CSV row");
    run_cmd->add_option("--kernel", run.kernel, "Kernel file (.kisa) or generator spec")->required();
    run_cmd->add_option("--config", run.config, "key=value machine configuration file");
    run_cmd->add_option("--machine", run.machine, "baseline, swplus, lwplus or lwplus-free");
    run_cmd->add_option("--warp-size", run.warp_size, "Warp size (baseline)");
    run_cmd->add_option("--simd-width", run.simd_width, "SIMD width");
    run_cmd->add_option("--sm-count", run.sm_count, "Number of SMs");
    run_cmd->add_option("--seed", run.seed, "Generator seed");
    run_cmd->add_option("--cycle-budget", run.cycle_budget, "Abort after this many cycles");
    run_cmd->add_flag("--no-verify", run.no_verify, "Skip the reference-interpreter check");
    run_cmd->add_option("--out", run.out, "Write the CSV here instead of stdout");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a design-space sweep");
    sweep_cmd->add_option("--spec", sw.spec, "Sweep spec file")->required();
    sweep_cmd->add_option("--out", sw.out, "Results CSV")->required();
    sweep_cmd->add_option("--chart", sw.chart, "metric[:normalize_target], e.g. ipc:baseline-32");
    sweep_cmd->add_option("-o", sw.chart_out, "Chart SVG output");
    sweep_cmd->add_option("--jobs", sw.jobs, "Concurrent points (default: spec or hardware threads)");

    std::string gen_class;
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    auto* gen_cmd = app.add_subcommand("gen", "Emit a synthetic kernel");
    gen_cmd->add_option("--class", gen_class, "Generator, e.g. divergent_tree:depth=3")->required();
    gen_cmd->add_option("--seed", gen_seed, "Seed");
    gen_cmd->add_option("-o", gen_out, "Output .kisa file (default stdout)");

    std::string ipdom_kernel;
    std::uint64_t ipdom_seed = 1;
    auto* ipdom_cmd = app.add_subcommand("ipdom", "Dump the CFG and immediate post-dominators");
    ipdom_cmd->add_option("--kernel", ipdom_kernel, "Kernel file or generator spec")->required();
    ipdom_cmd->add_option("--seed", ipdom_seed, "Generator seed");

    std::string oracle_kernel;
    std::string oracle_words;
    std::uint64_t oracle_seed = 1;
    auto* oracle_cmd = app.add_subcommand("oracle", "Run the sequential reference interpreter only");
    oracle_cmd->add_option("--kernel", oracle_kernel, "Kernel file or generator spec")->required();
    oracle_cmd->add_option("--seed", oracle_seed, "Generator seed");
    oracle_cmd->add_option("--words", oracle_words, "Print ADDR[:COUNT] final memory words");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(run);
        if (*sweep_cmd) return cmd_sweep(sw);
        if (*gen_cmd) return cmd_gen(gen_class, gen_seed, gen_out);
        if (*ipdom_cmd) return cmd_ipdom(ipdom_kernel, ipdom_seed);
        if (*oracle_cmd) return cmd_oracle(oracle_kernel, oracle_seed, oracle_words);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
