#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "warpsim/driver/run.hpp"
#include "warpsim/metrics/report.hpp"

namespace warpsim::driver {

struct SweepSpec {
    std::vector<std::string> kernels;
    std::vector<std::string> machines = {"baseline", "swplus", "lwplus"};
    std::vector<unsigned> warp_sizes = {8, 16, 32, 64};
    std::vector<unsigned> simd_widths = {8};
    RunSettings shared;
    unsigned jobs = 0; // 0 = one per hardware thread
};

// key=value lines. kernels/machines/warp_sizes/simd_widths take comma lists
// ("kernel = X" may also repeat); jobs sets concurrency; every other key is a
// shared run setting.
SweepSpec parse_sweep_spec(std::string_view text);

struct SweepPoint {
    std::size_t kernel_index = 0;
    std::string machine;
    unsigned simd_width = 8;
    unsigned warp_size = 32; // requested; SW+/LW+ points carry their forced size
};

// Points in output order: kernel, machine (as listed), SIMD width, warp size.
// Baseline combinations whose warp size is not a multiple of the width are
// skipped; SW+ and LW+ contribute one point per width.
std::vector<SweepPoint> expand(const SweepSpec& spec);

// Runs every point, `jobs` at a time. A failing point becomes a row with its
// error filled in; the others still run. Row order never depends on jobs.
std::vector<metrics::RunRecord> sweep(const SweepSpec& spec, unsigned jobs);

} // namespace warpsim::driver
