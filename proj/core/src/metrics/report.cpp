#include "warpsim/metrics/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "warpsim/error.hpp"

namespace warpsim::metrics {
namespace {

std::string fixed6(std::optional<double> v)
{
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string escape_xml(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> columns = {
        "kernel",          "machine",         "warp_size",         "simd_width",    "sm_count",
        "total_cycles",    "idle_cycles",     "committed_scalar_insns", "scalar_mem_insns",
        "offchip_requests", "offchip_reads",  "offchip_writes",    "merged_reads",  "l1_hits",
        "l1_misses",       "simd_slots_issued", "active_slots",    "splits_created", "coalescing_rate",
        "idle_share",      "ipc",             "simd_efficiency",   "error",
    };
    return columns;
}

std::string csv_header()
{
    std::string out;
    for (const auto& c : csv_columns()) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

std::string csv_row(const RunRecord& run)
{
    const SimStats& s = run.stats;
    const auto& c = run.config;
    std::ostringstream out;
    out << quote(run.kernel) << ',' << c.label() << ',' << c.warp_size << ',' << c.simd_width << ',' << c.sm_count
        << ',' << s.total_cycles << ',' << s.idle_cycles << ',' << s.committed_scalar_instructions << ','
        << s.scalar_memory_instructions << ',' << s.offchip_requests() << ',' << s.offchip_reads << ','
        << s.offchip_writes << ',' << s.merged_reads << ',' << s.l1_hits << ',' << s.l1_misses << ','
        << s.simd_slots_issued << ',' << s.active_slots << ',' << s.splits_created << ','
        << fixed6(coalescing_rate(s)) << ',' << fixed6(idle_share(s)) << ',' << fixed6(ipc(s)) << ','
        << fixed6(simd_efficiency(s)) << ',' << quote(run.error);
    return out.str();
}

std::string emit_csv(const std::vector<RunRecord>& runs)
{
    std::string out = csv_header() + "\n";
    for (const auto& r : runs) out += csv_row(r) + "\n";
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        any = true;
        if (quoted) {
            if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            row.push_back(std::move(cell));
            cell.clear();
        } else if (ch == '\n') {
            row.push_back(std::move(cell));
            cell.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (any) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

ChartMetric parse_chart_metric(std::string_view name)
{
    const std::string n = lower(std::string(name));
    if (n == "coalescing_rate") return ChartMetric::CoalescingRate;
    if (n == "idle_share") return ChartMetric::IdleShare;
    if (n == "ipc") return ChartMetric::Ipc;
    if (n == "simd_efficiency") return ChartMetric::SimdEfficiency;
    throw ConfigError("chart", "unknown metric '" + std::string(name) +
                                   "' (coalescing_rate, idle_share, ipc, simd_efficiency)");
}

std::string_view chart_metric_name(ChartMetric metric)
{
    switch (metric) {
    case ChartMetric::CoalescingRate: return "coalescing_rate";
    case ChartMetric::IdleShare: return "idle_share";
    case ChartMetric::Ipc: return "ipc";
    case ChartMetric::SimdEfficiency: return "simd_efficiency";
    }
    return "?";
}

std::optional<double> metric_value(const SimStats& stats, ChartMetric metric)
{
    switch (metric) {
    case ChartMetric::CoalescingRate: return coalescing_rate(stats);
    case ChartMetric::IdleShare: return idle_share(stats);
    case ChartMetric::Ipc: return ipc(stats);
    case ChartMetric::SimdEfficiency: return simd_efficiency(stats);
    }
    return std::nullopt;
}

std::string series_label(const RunRecord& run)
{
    std::string label = run.config.label() + "-" + std::to_string(run.config.warp_size);
    if (run.config.simd_width != 8) label += "/w" + std::to_string(run.config.simd_width);
    return label;
}

std::string emit_chart(const std::vector<RunRecord>& runs, ChartMetric metric,
                       const std::optional<std::string>& normalize_to)
{
    if (runs.empty()) throw Error("chart requested for an empty run list");

    // Groups and series in first-appearance order.
    std::vector<std::string> groups;
    std::vector<std::string> series;
    std::map<std::pair<std::string, std::string>, std::optional<double>> values;
    for (const auto& r : runs) {
        const std::string s = series_label(r);
        if (std::find(groups.begin(), groups.end(), r.kernel) == groups.end()) groups.push_back(r.kernel);
        if (std::find(series.begin(), series.end(), s) == series.end()) series.push_back(s);
        values[{r.kernel, s}] = r.error.empty() ? metric_value(r.stats, metric) : std::nullopt;
    }

    if (normalize_to) {
        const std::string target = lower(*normalize_to);
        auto it = std::find_if(series.begin(), series.end(), [&](const std::string& s) { return lower(s) == target; });
        if (it == series.end()) throw Error("normalization target '" + *normalize_to + "' is not among the runs");
        const std::string ref_series = *it;
        for (const auto& g : groups) {
            auto ref = values.find({g, ref_series});
            if (ref == values.end() || !ref->second || *ref->second == 0.0) {
                throw Error("normalization target '" + *normalize_to + "' has no usable value for kernel '" + g + "'");
            }
            const double base = *ref->second;
            for (const auto& s : series) {
                auto v = values.find({g, s});
                if (v != values.end() && v->second) v->second = *v->second / base;
            }
        }
    }

    double max_value = 0.0;
    for (const auto& [k, v] : values) {
        if (v) max_value = std::max(max_value, *v);
    }
    if (max_value <= 0.0) max_value = 1.0;

    static constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                               "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
    const double bar_w = 14.0;
    const double group_gap = 24.0;
    const double left = 60.0, top = 40.0, plot_h = 240.0, bottom = 90.0;
    const double group_w = bar_w * static_cast<double>(series.size()) + group_gap;
    const double width = left + group_w * static_cast<double>(groups.size()) + 20.0 + 160.0;
    const double height = top + plot_h + bottom;

    std::ostringstream svg;
    char buf[256];
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(width) << "\" height=\""
        << static_cast<int>(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<title>" << chart_metric_name(metric);
    if (normalize_to) svg << " normalized to " << escape_xml(*normalize_to);
    svg << "</title>\n";
    svg << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << chart_metric_name(metric);
    if (normalize_to) svg << " (normalized to " << escape_xml(*normalize_to) << ")";
    svg << "</text>\n";

    // Axis and ticks.
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - 170.0 << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = max_value * t / 4.0;
        const double y = top + plot_h - plot_h * t / 4.0;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n", left - 4, y + 4, v);
        svg << buf;
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double gx = left + 10.0 + group_w * static_cast<double>(g);
        for (std::size_t s = 0; s < series.size(); ++s) {
            auto it = values.find({groups[g], series[s]});
            if (it == values.end() || !it->second) continue;
            const double h = plot_h * (*it->second / max_value);
            std::snprintf(buf, sizeof buf,
                          "<rect class=\"bar\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"%s\">"
                          "<title>%s %s %.6f</title></rect>\n",
                          gx + bar_w * static_cast<double>(s), top + plot_h - h, bar_w - 1.0, h,
                          kPalette[s % std::size(kPalette)], escape_xml(groups[g]).c_str(),
                          escape_xml(series[s]).c_str(), *it->second);
            svg << buf;
        }
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" transform=\"rotate(30 %.1f %.1f)\">",
                      gx, top + plot_h + 14, gx, top + plot_h + 14);
        svg << buf << escape_xml(groups[g]) << "</text>\n";
    }

    const double lx = width - 160.0;
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = top + 14.0 * static_cast<double>(s);
        std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"10\" height=\"10\" fill=\"%s\"/>", lx, ly,
                      kPalette[s % std::size(kPalette)]);
        svg << buf << "<text x=\"" << lx + 14 << "\" y=\"" << ly + 9 << "\">" << escape_xml(series[s]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace warpsim::metrics
