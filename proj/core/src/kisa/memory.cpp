#include "warpsim/kisa/memory.hpp"

#include <algorithm>
#include <string>

#include "warpsim/error.hpp"

namespace warpsim::kisa {

MemoryImage::MemoryImage(std::size_t bytes) : bytes_(bytes, 0) {}

bool MemoryImage::valid_word(std::uint64_t addr) const
{
    return addr % kAccessBytes == 0 && addr + kAccessBytes <= bytes_.size();
}

std::uint32_t MemoryImage::load32(std::uint32_t addr) const
{
    const std::uint8_t* p = bytes_.data() + addr;
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

void MemoryImage::store32(std::uint32_t addr, std::uint32_t value)
{
    std::uint8_t* p = bytes_.data() + addr;
    p[0] = static_cast<std::uint8_t>(value);
    p[1] = static_cast<std::uint8_t>(value >> 8);
    p[2] = static_cast<std::uint8_t>(value >> 16);
    p[3] = static_cast<std::uint8_t>(value >> 24);
}

void MemoryImage::write_words(std::uint32_t addr, std::span<const std::uint32_t> words)
{
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::uint64_t a = std::uint64_t{addr} + 4 * i;
        if (!valid_word(a)) {
            throw ConfigError("data", "word at address " + std::to_string(a) + " lies outside the " +
                                          std::to_string(bytes_.size()) + "-byte memory image");
        }
        store32(static_cast<std::uint32_t>(a), words[i]);
    }
}

void MemoryImage::apply(const std::vector<DataBlock>& blocks)
{
    for (const auto& b : blocks) write_words(b.address, b.words);
}

std::size_t MemoryImage::first_difference(const MemoryImage& other) const
{
    const std::size_t n = std::min(size(), other.size());
    auto [a, b] = std::mismatch(bytes_.begin(), bytes_.begin() + static_cast<std::ptrdiff_t>(n), other.bytes_.begin());
    const auto idx = static_cast<std::size_t>(a - bytes_.begin());
    if (idx < n) return idx;
    return size() == other.size() ? size() : n;
}

} // namespace warpsim::kisa
