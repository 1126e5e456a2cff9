#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "warpsim/kisa/parser.hpp"

namespace warpsim::kisa {

inline constexpr std::size_t kDefaultMemoryBytes = std::size_t{16} << 20;

// Flat, zero-initialized global memory with 32-bit addresses.
class MemoryImage {
public:
    explicit MemoryImage(std::size_t bytes = kDefaultMemoryBytes);

    std::size_t size() const { return bytes_.size(); }

    // True when a 4-byte access at addr is aligned and inside the image.
    bool valid_word(std::uint64_t addr) const;

    std::uint32_t load32(std::uint32_t addr) const;
    void store32(std::uint32_t addr, std::uint32_t value);

    void write_words(std::uint32_t addr, std::span<const std::uint32_t> words);
    void apply(const std::vector<DataBlock>& blocks);

    std::span<const std::uint8_t> bytes() const { return bytes_; }

    // Index of the first differing byte, or size() if the images match.
    std::size_t first_difference(const MemoryImage& other) const;

    bool operator==(const MemoryImage&) const = default;

private:
    std::vector<std::uint8_t> bytes_;
};

} // namespace warpsim::kisa
