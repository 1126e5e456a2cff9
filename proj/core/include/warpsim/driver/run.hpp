#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "warpsim/kisa/cfg.hpp"
#include "warpsim/kisa/parser.hpp"
#include "warpsim/machines/config.hpp"
#include "warpsim/metrics/report.hpp"
#include "warpsim/sim/simulator.hpp"

namespace warpsim::driver {

// SM count used when neither a config file nor a flag sets one.
inline constexpr unsigned kDefaultSmCount = 1;

// A machine as named on the command line: "baseline", "swplus", "lwplus"
// (per-instruction sync) or "lwplus-free" (free-running splits).
struct MachineSelector {
    machines::MachineModel model = machines::MachineModel::Baseline;
    std::optional<machines::LwSyncMode> sync_mode;
};

MachineSelector parse_machine_selector(std::string_view name);

// Settings shared by config files, sweep specs and CLI flags.
struct RunSettings {
    machines::MachineOverrides overrides;
    std::optional<std::string> machine;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> cycle_budget;
    std::optional<bool> verify;

    // Fields set in `other` win.
    void merge(const RunSettings& other);
};

// Applies one key=value setting. Returns false for keys it does not know;
// throws ConfigError for bad values.
bool apply_setting(RunSettings& settings, std::string_view key, std::string_view value);

// Flat key=value text, '#' comments. Unknown keys are an error naming the line.
RunSettings parse_settings(std::string_view text);
RunSettings load_settings(const std::string& path);

std::string read_file(const std::string& path);

struct LoadedKernel {
    std::string label;
    std::string text;
    kisa::KernelSource source;
};

// `kernel` is a generator spec ("divergent_tree:depth=3") or a .kisa path.
LoadedKernel load_kernel(const std::string& kernel, std::uint64_t seed);

machines::MachineConfig machine_config(const MachineSelector& machine, const machines::MachineOverrides& overrides);

struct RunOptions {
    bool verify = true;
    std::uint64_t cycle_budget = 100'000'000;
    bool check_invariants = false;
    bool record_traces = false;
};

struct RunOutcome {
    metrics::RunRecord record;
    sim::SimResult result;
};

// Simulates a loaded kernel and, unless disabled, checks the final memory and
// the committed instruction count against the reference interpreter. Throws
// CorrectnessError naming the first differing address.
RunOutcome run_kernel(const LoadedKernel& kernel, const kisa::KernelAnalysis& analysis,
                      const machines::MachineConfig& config, const RunOptions& options = {});

struct RunSpec {
    std::string kernel;
    RunSettings settings;
    std::optional<kisa::LaunchConfig> launch; // replaces the kernel's own geometry
};

RunOutcome run(const RunSpec& spec);

// Throws CorrectnessError if the images differ.
void verify_memory(const kisa::MemoryImage& expected, const kisa::MemoryImage& actual);

} // namespace warpsim::driver
