#include "warpsim/driver/sweep.hpp"

#include <atomic>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "warpsim/error.hpp"

namespace warpsim::driver {
namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view value)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string_view item = trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<unsigned> split_numbers(std::string_view key, std::string_view value)
{
    std::vector<unsigned> out;
    for (const auto& item : split_list(value)) {
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size() || v == 0) {
            throw ConfigError(std::string(key), "expected positive integers, got '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string(key), "empty list");
    return out;
}

struct PreparedKernel {
    std::optional<LoadedKernel> kernel;
    std::optional<kisa::KernelAnalysis> analysis;
    std::string label;
    std::string error;
};

metrics::RunRecord run_point(const SweepSpec& spec, const SweepPoint& point, const PreparedKernel& prepared)
{
    metrics::RunRecord record;
    record.kernel = prepared.label;
    const MachineSelector selector = parse_machine_selector(point.machine);
    record.config.model = selector.model;
    record.config.simd_width = point.simd_width;
    record.config.warp_size = point.warp_size;
    record.config.sm_count = spec.shared.overrides.sm_count.value_or(kDefaultSmCount);
    if (selector.sync_mode) record.config.lw_sync_mode = *selector.sync_mode;
    if (!prepared.error.empty()) {
        record.error = prepared.error;
        return record;
    }
    try {
        machines::MachineOverrides o = spec.shared.overrides;
        o.simd_width = point.simd_width;
        if (selector.model == machines::MachineModel::Baseline) o.warp_size = point.warp_size;
        else o.warp_size.reset();
        const auto config = machine_config(selector, o);
        record.config = config;
        RunOptions options;
        options.verify = spec.shared.verify.value_or(true);
        options.cycle_budget = spec.shared.cycle_budget.value_or(options.cycle_budget);
        record = run_kernel(*prepared.kernel, *prepared.analysis, config, options).record;
    } catch (const std::exception& e) {
        record.error = e.what();
    }
    return record;
}

} // namespace

SweepSpec parse_sweep_spec(std::string_view text)
{
    SweepSpec spec;
    bool kernels_listed = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        try {
            if (eq == std::string_view::npos) throw ConfigError("sweep", "expected key=value");
            const std::string_view key = trim(line.substr(0, eq));
            const std::string_view value = trim(line.substr(eq + 1));
            if (key == "kernels" || key == "kernel") {
                for (auto& k : split_list(value)) spec.kernels.push_back(std::move(k));
                kernels_listed = true;
            } else if (key == "machines") {
                spec.machines = split_list(value);
                for (const auto& m : spec.machines) parse_machine_selector(m);
                if (spec.machines.empty()) throw ConfigError("machines", "empty list");
            } else if (key == "warp_sizes") {
                spec.warp_sizes = split_numbers(key, value);
            } else if (key == "simd_widths") {
                spec.simd_widths = split_numbers(key, value);
            } else if (key == "jobs") {
                spec.jobs = split_numbers(key, value).at(0);
            } else if (key == "warp_size" || key == "simd_width" || key == "machine") {
                throw ConfigError(std::string(key), "use the list form (warp_sizes, simd_widths, machines) in a sweep");
            } else if (!apply_setting(spec.shared, key, value)) {
                throw ConfigError(std::string(key), "unknown key");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(e.field(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!kernels_listed || spec.kernels.empty()) throw ConfigError("kernels", "a sweep needs at least one kernel");
    return spec;
}

std::vector<SweepPoint> expand(const SweepSpec& spec)
{
    std::vector<SweepPoint> points;
    for (std::size_t k = 0; k < spec.kernels.size(); ++k) {
        for (const auto& machine : spec.machines) {
            const MachineSelector sel = parse_machine_selector(machine);
            for (unsigned width : spec.simd_widths) {
                switch (sel.model) {
                case machines::MachineModel::Baseline:
                    for (unsigned warp : spec.warp_sizes) {
                        if (width == 0 || warp % width != 0) continue;
                        points.push_back({k, machine, width, warp});
                    }
                    break;
                case machines::MachineModel::SwPlus: points.push_back({k, machine, width, width}); break;
                case machines::MachineModel::LwPlus: points.push_back({k, machine, width, 8 * width}); break;
                }
            }
        }
    }
    return points;
}

std::vector<metrics::RunRecord> sweep(const SweepSpec& spec, unsigned jobs)
{
    const std::uint64_t seed = spec.shared.seed.value_or(1);
    std::vector<PreparedKernel> kernels(spec.kernels.size());
    for (std::size_t k = 0; k < spec.kernels.size(); ++k) {
        auto& p = kernels[k];
        p.label = spec.kernels[k];
        try {
            p.kernel = load_kernel(spec.kernels[k], seed);
            p.label = p.kernel->label;
            p.analysis = kisa::KernelAnalysis::of(p.kernel->source.program);
        } catch (const std::exception& e) {
            p.error = e.what();
        }
    }

    const auto points = expand(spec);
    std::vector<metrics::RunRecord> rows(points.size());
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(points.size(), 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            rows[i] = run_point(spec, points[i], kernels[points[i].kernel_index]);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

} // namespace warpsim::driver
