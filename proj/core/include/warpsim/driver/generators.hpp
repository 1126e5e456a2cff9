#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "warpsim/kisa/memory.hpp"
#include "warpsim/kisa/parser.hpp"

namespace warpsim::driver {

enum class KernelClass { UnitStrideCopy, BroadcastRead, RandomGather, DivergentTree, ComputeLoop, Mixed };

// Base addresses of the generated kernels' data regions.
inline constexpr std::uint32_t kInputBase = 0x100000;
inline constexpr std::uint32_t kOutputBase = 0x400000;
inline constexpr std::uint32_t kIndexBase = 0x800000;

struct GeneratorParams {
    std::uint32_t threads = 1024;
    std::uint32_t block = 256;
    unsigned elements = 4;  // unit_stride_copy: words copied per thread
    unsigned depth = 3;     // divergent_tree
    unsigned bit_base = 3;  // divergent_tree: level k branches on tid bit bit_base + k
    bool tree_store = false; // divergent_tree: store each thread's leaf value
    unsigned iters = 16;    // compute_loop, mixed
};

// Generator name plus parameters, written "name[:key=value]..." e.g.
// "divergent_tree:depth=3:bit_base=0".
struct GeneratorSpec {
    KernelClass kind = KernelClass::UnitStrideCopy;
    GeneratorParams params;

    // Canonical "name[:key=value]..." listing only non-default parameters.
    std::string label() const;
};

std::string_view class_name(KernelClass kind);
KernelClass parse_class(std::string_view name);
const std::vector<KernelClass>& all_classes();

// Throws ConfigError on unknown classes, unknown keys or invalid values.
GeneratorSpec parse_generator_spec(std::string_view text);

// True when text names a generator (its class part is a known class name).
bool is_generator_spec(std::string_view text);

struct GeneratedKernel {
    std::string text; // self-contained .kisa with .grid/.block/.data directives
    kisa::KernelSource source;
};

// Deterministic in (spec, seed): same inputs give byte-identical text.
GeneratedKernel generate_kernel(const GeneratorSpec& spec, std::uint64_t seed);

// Initial memory image of a kernel: zeroed, then its data directives applied.
kisa::MemoryImage initial_memory(const kisa::KernelSource& source, std::size_t bytes = kisa::kDefaultMemoryBytes);

} // namespace warpsim::driver
