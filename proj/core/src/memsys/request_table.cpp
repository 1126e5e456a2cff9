#include "warpsim/memsys/request_table.hpp"

#include <stdexcept>

namespace warpsim::memsys {

RequestTable::RequestTable(TableScope scope, std::optional<std::size_t> capacity)
    : scope_(scope), capacity_(capacity)
{
}

RequestTable::Issued RequestTable::issue(std::uint32_t segment_addr, bool is_write, std::uint64_t waiter)
{
    if (scope_ == TableScope::AllThreads && !is_write) {
        if (auto it = pending_reads_.find(segment_addr); it != pending_reads_.end()) {
            entries_.at(it->second).waiters.push_back(waiter);
            return {IssueOutcome::MergedIntoPending, it->second};
        }
    }
    if (full()) return {IssueOutcome::StalledTableFull, 0};

    const std::uint64_t id = next_id_++;
    entries_.emplace(id, Entry{segment_addr, is_write, {waiter}});
    if (scope_ == TableScope::AllThreads && !is_write) pending_reads_[segment_addr] = id;
    return {IssueOutcome::NewOffchip, id};
}

RequestTable::Completed RequestTable::complete(std::uint64_t entry)
{
    auto it = entries_.find(entry);
    if (it == entries_.end()) throw std::logic_error("completing unknown request table entry");
    Completed done{it->second.segment_addr, it->second.is_write, std::move(it->second.waiters)};
    if (scope_ == TableScope::AllThreads && !done.is_write) pending_reads_.erase(done.segment_addr);
    entries_.erase(it);
    return done;
}

} // namespace warpsim::memsys
