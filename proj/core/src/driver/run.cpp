#include "warpsim/driver/run.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "warpsim/driver/generators.hpp"
#include "warpsim/error.hpp"
#include "warpsim/kisa/interpreter.hpp"

namespace warpsim::driver {
namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value)
{
    std::uint64_t v = 0;
    int base = 10;
    if (value.size() > 2 && value[0] == '0' && (value[1] == 'x' || value[1] == 'X')) {
        value.remove_prefix(2);
        base = 16;
    }
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v, base);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(value) + "'");
    }
    return v;
}

template <typename T>
T parse_num(std::string_view key, std::string_view value)
{
    const std::uint64_t v = parse_u64(key, value);
    if (v > std::numeric_limits<T>::max()) throw ConfigError(std::string(key), "value out of range");
    return static_cast<T>(v);
}

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src)
{
    if (src) dst = src;
}

} // namespace

MachineSelector parse_machine_selector(std::string_view name)
{
    std::string n(trim(name));
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "lwplus-free" || n == "lw+-free") return {machines::MachineModel::LwPlus, machines::LwSyncMode::FreeRunning};
    if (n == "lwplus-sync" || n == "lw+-sync") {
        return {machines::MachineModel::LwPlus, machines::LwSyncMode::PerInstruction};
    }
    return {machines::parse_model(n), std::nullopt};
}

void RunSettings::merge(const RunSettings& o)
{
    overrides.merge(o.overrides);
    take(machine, o.machine);
    take(seed, o.seed);
    take(cycle_budget, o.cycle_budget);
    take(verify, o.verify);
}

bool apply_setting(RunSettings& s, std::string_view key, std::string_view value)
{
    auto& o = s.overrides;
    if (key == "warp_size") o.warp_size = parse_num<unsigned>(key, value);
    else if (key == "simd_width") o.simd_width = parse_num<unsigned>(key, value);
    else if (key == "pipeline_depth") o.pipeline_depth = parse_num<unsigned>(key, value);
    else if (key == "sm_count") o.sm_count = parse_num<unsigned>(key, value);
    else if (key == "threads_per_sm") o.threads_per_sm = parse_num<std::uint32_t>(key, value);
    else if (key == "max_ctas_per_sm") o.max_ctas_per_sm = parse_num<std::uint32_t>(key, value);
    else if (key == "l1_size") o.l1_size = parse_num<std::uint32_t>(key, value);
    else if (key == "l1_ways") o.l1_ways = parse_num<std::uint32_t>(key, value);
    else if (key == "l1_block") o.l1_block = parse_num<std::uint32_t>(key, value);
    else if (key == "l1_hit_latency") o.l1_hit_latency = parse_num<unsigned>(key, value);
    else if (key == "table_capacity") o.table_capacity = parse_num<std::size_t>(key, value);
    else if (key == "mem_ctrls") o.mem_ctrls = parse_num<unsigned>(key, value);
    else if (key == "dram_latency") o.dram_latency = parse_num<unsigned>(key, value);
    else if (key == "dram_service_cycles") o.dram_service_cycles = parse_num<unsigned>(key, value);
    else if (key == "lw_sync_mode") o.lw_sync_mode = machines::parse_sync_mode(value);
    else if (key == "mem_size") o.memory_bytes = parse_num<std::size_t>(key, value);
    else if (key == "seed") {
        s.seed = parse_u64(key, value);
        o.rng_seed = s.seed;
    } else if (key == "machine") {
        parse_machine_selector(value);
        s.machine = std::string(value);
    } else if (key == "cycle_budget") s.cycle_budget = parse_u64(key, value);
    else if (key == "verify") s.verify = parse_u64(key, value) != 0;
    else return false;
    return true;
}

RunSettings parse_settings(std::string_view text)
{
    RunSettings settings;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config", "line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        try {
            if (!apply_setting(settings, key, value)) throw ConfigError(std::string(key), "unknown key");
        } catch (const ConfigError& e) {
            throw ConfigError(e.field(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return settings;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

RunSettings load_settings(const std::string& path) { return parse_settings(read_file(path)); }

LoadedKernel load_kernel(const std::string& kernel, std::uint64_t seed)
{
    if (is_generator_spec(kernel)) {
        const GeneratorSpec spec = parse_generator_spec(kernel);
        GeneratedKernel g = generate_kernel(spec, seed);
        return {spec.label(), std::move(g.text), std::move(g.source)};
    }
    std::string text = read_file(kernel);
    kisa::KernelSource source = kisa::parse_kernel(text);
    return {kernel, std::move(text), std::move(source)};
}

machines::MachineConfig machine_config(const MachineSelector& machine, const machines::MachineOverrides& overrides)
{
    machines::MachineOverrides o;
    o.sm_count = kDefaultSmCount;
    o.merge(overrides);
    if (machine.sync_mode) o.lw_sync_mode = machine.sync_mode;
    return machines::configure_machine(machine.model, o);
}

void verify_memory(const kisa::MemoryImage& expected, const kisa::MemoryImage& actual)
{
    const std::size_t diff = expected.first_difference(actual);
    if (diff == expected.size() && expected.size() == actual.size()) return;
    if (diff >= expected.size() || diff >= actual.size()) {
        throw CorrectnessError("final memory size differs from the reference");
    }
    const std::uint32_t word = static_cast<std::uint32_t>(diff & ~std::size_t{3});
    char buf[160];
    std::snprintf(buf, sizeof buf, "final memory differs from the reference at address 0x%x: expected 0x%08x, got 0x%08x",
                  static_cast<unsigned>(diff), expected.load32(word), actual.load32(word));
    throw CorrectnessError(buf);
}

RunOutcome run_kernel(const LoadedKernel& kernel, const kisa::KernelAnalysis& analysis,
                      const machines::MachineConfig& config, const RunOptions& options)
{
    if (!kernel.source.launch) {
        throw ConfigError("launch", "kernel '" + kernel.label + "' has no .grid/.block directives");
    }
    const kisa::LaunchConfig& launch = *kernel.source.launch;
    kisa::MemoryImage initial = initial_memory(kernel.source, config.memory_bytes);

    sim::SimOptions sim_options;
    sim_options.cycle_budget = options.cycle_budget;
    sim_options.check_invariants = options.check_invariants;
    sim_options.record_traces = options.record_traces;

    RunOutcome out;
    out.record.kernel = kernel.label;
    out.record.config = config;
    if (options.verify) {
        auto reference = kisa::reference_execute(kernel.source.program, launch, initial);
        out.result = sim::simulate(kernel.source.program, analysis, launch, std::move(initial), config, sim_options);
        verify_memory(reference.memory, out.result.memory);
        const std::uint64_t expected = reference.total_instructions();
        if (expected != out.result.stats.committed_scalar_instructions) {
            throw CorrectnessError("committed " + std::to_string(out.result.stats.committed_scalar_instructions) +
                                   " scalar instructions, reference executed " + std::to_string(expected));
        }
    } else {
        out.result = sim::simulate(kernel.source.program, analysis, launch, std::move(initial), config, sim_options);
    }
    out.record.stats = out.result.stats;
    return out;
}

RunOutcome run(const RunSpec& spec)
{
    LoadedKernel kernel = load_kernel(spec.kernel, spec.settings.seed.value_or(1));
    if (spec.launch) kernel.source.launch = spec.launch;
    const auto analysis = kisa::KernelAnalysis::of(kernel.source.program);
    const auto config = machine_config(parse_machine_selector(spec.settings.machine.value_or("baseline")),
                                       spec.settings.overrides);
    RunOptions options;
    options.verify = spec.settings.verify.value_or(true);
    options.cycle_budget = spec.settings.cycle_budget.value_or(options.cycle_budget);
    return run_kernel(kernel, analysis, config, options);
}

} // namespace warpsim::driver
