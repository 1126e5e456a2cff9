#include "warpsim/memsys/cache.hpp"

#include "warpsim/error.hpp"

namespace warpsim::memsys {

L1Cache::L1Cache(const CacheGeometry& geometry) : geometry_(geometry), sets_(geometry.sets())
{
    if (geometry.ways == 0 || geometry.block_bytes == 0 || sets_ == 0 ||
        geometry.size_bytes % (geometry.ways * geometry.block_bytes) != 0) {
        throw ConfigError("l1_size", "cache size must be a positive multiple of ways * block size");
    }
    lines_.resize(std::size_t{sets_} * geometry.ways);
}

std::uint32_t L1Cache::set_index(std::uint32_t segment_addr) const
{
    return (segment_addr / geometry_.block_bytes) % sets_;
}

L1Cache::Line* L1Cache::find(std::uint32_t segment_addr)
{
    const std::uint32_t tag = segment_addr / geometry_.block_bytes;
    Line* set = &lines_[std::size_t{set_index(segment_addr)} * geometry_.ways];
    for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
        if (set[w].valid && set[w].tag == tag) return &set[w];
    }
    return nullptr;
}

const L1Cache::Line* L1Cache::find(std::uint32_t segment_addr) const
{
    return const_cast<L1Cache*>(this)->find(segment_addr);
}

bool L1Cache::contains(std::uint32_t segment_addr) const { return find(segment_addr) != nullptr; }

CacheAccess L1Cache::access(std::uint32_t segment_addr, bool /*is_write*/)
{
    if (Line* line = find(segment_addr)) {
        line->last_use = ++clock_;
        return {true, geometry_.hit_latency};
    }
    return {false, 0};
}

void L1Cache::fill(std::uint32_t segment_addr)
{
    if (Line* line = find(segment_addr)) {
        line->last_use = ++clock_;
        return;
    }
    Line* set = &lines_[std::size_t{set_index(segment_addr)} * geometry_.ways];
    Line* victim = &set[0];
    for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
        if (!set[w].valid) {
            victim = &set[w];
            break;
        }
        if (set[w].last_use < victim->last_use) victim = &set[w];
    }
    victim->valid = true;
    victim->tag = segment_addr / geometry_.block_bytes;
    victim->last_use = ++clock_;
}

} // namespace warpsim::memsys
