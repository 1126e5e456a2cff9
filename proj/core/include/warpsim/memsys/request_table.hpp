#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace warpsim::memsys {

enum class TableScope {
    IntraWarpOnly, // every miss is its own off-chip request
    AllThreads,    // reads merge with a pending read of the same segment
};

enum class IssueOutcome { NewOffchip, MergedIntoPending, StalledTableFull };

// Outstanding off-chip requests of one SM. Waiters are opaque tokens owned by
// the caller; they are handed back when the entry completes.
class RequestTable {
public:
    RequestTable(TableScope scope, std::optional<std::size_t> capacity);

    struct Issued {
        IssueOutcome outcome = IssueOutcome::StalledTableFull;
        std::uint64_t entry = 0; // valid for NewOffchip and MergedIntoPending
    };

    Issued issue(std::uint32_t segment_addr, bool is_write, std::uint64_t waiter);

    struct Completed {
        std::uint32_t segment_addr = 0;
        bool is_write = false;
        std::vector<std::uint64_t> waiters;
    };

    Completed complete(std::uint64_t entry);

    TableScope scope() const { return scope_; }
    std::size_t outstanding() const { return entries_.size(); }
    bool full() const { return capacity_ && entries_.size() >= *capacity_; }
    bool has_pending_read(std::uint32_t segment_addr) const { return pending_reads_.count(segment_addr) != 0; }

private:
    struct Entry {
        std::uint32_t segment_addr;
        bool is_write;
        std::vector<std::uint64_t> waiters;
    };

    TableScope scope_;
    std::optional<std::size_t> capacity_;
    std::uint64_t next_id_ = 0;
    std::unordered_map<std::uint64_t, Entry> entries_;
    std::map<std::uint32_t, std::uint64_t> pending_reads_; // AllThreads only
};

} // namespace warpsim::memsys
