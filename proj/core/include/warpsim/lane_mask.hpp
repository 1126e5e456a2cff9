#pragma once

#include <bit>
#include <cstdint>

namespace warpsim {

// Bitmask over the lanes of one warp. Warps are capped at 64 lanes.
class LaneMask {
public:
    static constexpr unsigned kMaxLanes = 64;

    constexpr LaneMask() = default;
    constexpr explicit LaneMask(std::uint64_t bits) : bits_(bits) {}

    static constexpr LaneMask first(unsigned count)
    {
        return LaneMask(count >= kMaxLanes ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1);
    }
    static constexpr LaneMask single(unsigned lane) { return LaneMask(std::uint64_t{1} << lane); }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool test(unsigned lane) const { return (bits_ >> lane) & 1u; }
    constexpr unsigned count() const { return static_cast<unsigned>(std::popcount(bits_)); }

    constexpr void set(unsigned lane) { bits_ |= std::uint64_t{1} << lane; }
    constexpr void reset(unsigned lane) { bits_ &= ~(std::uint64_t{1} << lane); }

    constexpr bool subset_of(LaneMask other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool disjoint(LaneMask other) const { return (bits_ & other.bits_) == 0; }

    constexpr LaneMask operator|(LaneMask o) const { return LaneMask(bits_ | o.bits_); }
    constexpr LaneMask operator&(LaneMask o) const { return LaneMask(bits_ & o.bits_); }
    constexpr LaneMask operator-(LaneMask o) const { return LaneMask(bits_ & ~o.bits_); }
    constexpr LaneMask& operator|=(LaneMask o) { bits_ |= o.bits_; return *this; }
    constexpr LaneMask& operator&=(LaneMask o) { bits_ &= o.bits_; return *this; }
    constexpr bool operator==(const LaneMask&) const = default;

    // Calls fn(lane) for every set lane in ascending order.
    template <typename Fn>
    constexpr void for_each(Fn&& fn) const
    {
        for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
            fn(static_cast<unsigned>(std::countr_zero(b)));
        }
    }

private:
    std::uint64_t bits_ = 0;
};

} // namespace warpsim
