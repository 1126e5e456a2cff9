#pragma once

#include <cstdint>
#include <vector>

namespace warpsim::memsys {

struct CacheGeometry {
    std::uint32_t size_bytes = 48 * 1024;
    std::uint32_t ways = 8;
    std::uint32_t block_bytes = 64;
    unsigned hit_latency = 1;

    std::uint32_t sets() const { return size_bytes / (ways * block_bytes); }
};

struct CacheAccess {
    bool hit = false;
    unsigned latency = 0; // hit latency; misses are timed by the off-chip path
};

// Set-associative L1 data cache with true LRU replacement. Reads allocate on
// fill; writes are write-through and never allocate.
class L1Cache {
public:
    explicit L1Cache(const CacheGeometry& geometry);

    const CacheGeometry& geometry() const { return geometry_; }
    std::uint32_t set_index(std::uint32_t segment_addr) const;

    bool contains(std::uint32_t segment_addr) const;

    CacheAccess access(std::uint32_t segment_addr, bool is_write);

    // Installs a block returned from memory, evicting the LRU way when the set
    // is full. Refreshes recency if the block is already present.
    void fill(std::uint32_t segment_addr);

private:
    struct Line {
        bool valid = false;
        std::uint32_t tag = 0;
        std::uint64_t last_use = 0;
    };

    Line* find(std::uint32_t segment_addr);
    const Line* find(std::uint32_t segment_addr) const;

    CacheGeometry geometry_;
    std::uint32_t sets_;
    std::vector<Line> lines_; // sets_ * ways
    std::uint64_t clock_ = 0;
};

} // namespace warpsim::memsys
