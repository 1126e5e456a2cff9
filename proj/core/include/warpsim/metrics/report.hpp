#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warpsim/machines/config.hpp"
#include "warpsim/metrics/stats.hpp"

namespace warpsim::metrics {

struct RunRecord {
    std::string kernel;
    machines::MachineConfig config;
    SimStats stats;
    std::string error; // empty on success
};

// Column order of every emitted CSV.
const std::vector<std::string>& csv_columns();

std::string csv_header();
std::string csv_row(const RunRecord& run);
std::string emit_csv(const std::vector<RunRecord>& runs);

// Splits CSV text into rows of cells; the header is row 0.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

enum class ChartMetric { CoalescingRate, IdleShare, Ipc, SimdEfficiency };

ChartMetric parse_chart_metric(std::string_view name);
std::string_view chart_metric_name(ChartMetric metric);
std::optional<double> metric_value(const SimStats& stats, ChartMetric metric);

// Series label of a run: "<machine>-<warp size>", e.g. "baseline-32".
std::string series_label(const RunRecord& run);

// Grouped bar chart as standalone SVG: one group per kernel, one bar per
// series. normalize_to names a series label (case-insensitive); each group is
// divided by that series' value. Throws Error when the target is missing.
std::string emit_chart(const std::vector<RunRecord>& runs, ChartMetric metric,
                       const std::optional<std::string>& normalize_to);

} // namespace warpsim::metrics
