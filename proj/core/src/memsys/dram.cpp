#include "warpsim/memsys/dram.hpp"

#include <algorithm>

#include "warpsim/error.hpp"
#include "warpsim/memsys/access.hpp"

namespace warpsim::memsys {

DramModel::DramModel(const DramParams& params)
    : params_(params), queues_(params.controllers), free_at_(params.controllers, 0)
{
    if (params.controllers == 0) throw ConfigError("mem_ctrls", "must be positive");
}

unsigned DramModel::controller_of(std::uint32_t segment_addr) const
{
    return (segment_addr / kSegmentBytes) % params_.controllers;
}

std::uint64_t DramModel::enqueue(std::uint64_t id, std::uint32_t segment_addr, std::uint64_t cycle)
{
    const unsigned c = controller_of(segment_addr);
    DramRequest r;
    r.id = id;
    r.segment_addr = segment_addr;
    r.arrival = cycle;
    r.start = std::max(cycle, free_at_[c]);
    free_at_[c] = r.start + params_.service_cycles;
    r.complete = r.start + params_.service_cycles + params_.fixed_latency;
    queues_[c].push_back(r);
    return r.complete;
}

std::vector<DramRequest> DramModel::tick(std::uint64_t cycle)
{
    std::vector<DramRequest> done;
    for (auto& q : queues_) {
        while (!q.empty() && q.front().complete <= cycle) {
            done.push_back(q.front());
            q.pop_front();
        }
    }
    return done;
}

bool DramModel::idle() const
{
    return std::all_of(queues_.begin(), queues_.end(), [](const auto& q) { return q.empty(); });
}

std::optional<std::uint64_t> DramModel::next_completion() const
{
    std::optional<std::uint64_t> next;
    for (const auto& q : queues_) {
        if (!q.empty() && (!next || q.front().complete < *next)) next = q.front().complete;
    }
    return next;
}

} // namespace warpsim::memsys
