#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace warpsim::memsys {

struct DramParams {
    unsigned controllers = 6;
    unsigned fixed_latency = 400;
    unsigned service_cycles = 4;
};

struct DramRequest {
    std::uint64_t id = 0;
    std::uint32_t segment_addr = 0;
    std::uint64_t arrival = 0;
    std::uint64_t start = 0;
    std::uint64_t complete = 0;
};

// FCFS memory controllers with a fixed access latency. Each request occupies
// its controller for service_cycles; controllers are interleaved by segment.
class DramModel {
public:
    explicit DramModel(const DramParams& params);

    const DramParams& params() const { return params_; }
    unsigned controller_of(std::uint32_t segment_addr) const;

    // Queues a request arriving at `cycle`; returns its completion cycle.
    std::uint64_t enqueue(std::uint64_t id, std::uint32_t segment_addr, std::uint64_t cycle);

    // Requests finishing at or before `cycle`, by controller, FCFS within one.
    std::vector<DramRequest> tick(std::uint64_t cycle);

    bool idle() const;
    // Earliest completion cycle among queued requests.
    std::optional<std::uint64_t> next_completion() const;
    std::size_t queued(unsigned controller) const { return queues_.at(controller).size(); }

private:
    DramParams params_;
    std::vector<std::deque<DramRequest>> queues_;
    std::vector<std::uint64_t> free_at_;
};

} // namespace warpsim::memsys
