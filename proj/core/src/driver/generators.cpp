#include "warpsim/driver/generators.hpp"

#include <charconv>
#include <cstdio>
#include <random>
#include <sstream>

#include "warpsim/error.hpp"

namespace warpsim::driver {
namespace {

constexpr std::uint32_t kRegionBytes = kOutputBase - kInputBase;

std::string hex(std::uint32_t v)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%x", v);
    return buf;
}

unsigned parse_uint(std::string_view key, std::string_view value)
{
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(value) + "'");
    }
    return v;
}

void validate(const GeneratorSpec& spec)
{
    const auto& p = spec.params;
    if (p.block == 0 || p.block > 1024) throw ConfigError("block", "must be in [1, 1024]");
    if (p.threads == 0 || p.threads % p.block != 0) throw ConfigError("threads", "must be a positive multiple of block");
    if (std::uint64_t{p.threads} * 4 > kRegionBytes) throw ConfigError("threads", "too many threads for the data regions");
    switch (spec.kind) {
    case KernelClass::UnitStrideCopy:
        if (p.elements == 0 || std::uint64_t{p.threads} * p.elements * 4 > kRegionBytes) {
            throw ConfigError("elements", "must be positive and fit the data regions");
        }
        break;
    case KernelClass::DivergentTree:
        if (p.depth == 0 || p.depth > 5) throw ConfigError("depth", "must be in [1, 5]");
        if (p.bit_base + p.depth > 10) throw ConfigError("bit_base", "tree bits must stay below bit 10");
        break;
    case KernelClass::ComputeLoop:
    case KernelClass::Mixed:
        if (p.iters == 0 || p.iters > 100000) throw ConfigError("iters", "must be in [1, 100000]");
        break;
    default: break;
    }
}

// gid in r0, tid in r2.
void prologue(std::ostream& out)
{
    out << "    mov r1, %ctaid\n"
           "    mov r2, %ntid\n"
           "    mul r1, r1, r2\n"
           "    mov r2, %tid\n"
           "    add r0, r1, r2\n";
}

void emit_data(std::ostream& out, std::uint32_t base, const std::vector<std::uint32_t>& words)
{
    for (std::size_t i = 0; i < words.size(); i += 16) {
        out << ".data " << hex(base + static_cast<std::uint32_t>(4 * i));
        for (std::size_t k = i; k < std::min(words.size(), i + 16); ++k) out << ' ' << hex(words[k]);
        out << '\n';
    }
}

std::vector<std::uint32_t> random_words(std::mt19937_64& rng, std::size_t n, std::uint32_t modulo = 0)
{
    std::vector<std::uint32_t> words(n);
    for (auto& w : words) {
        const std::uint64_t r = rng();
        w = modulo ? static_cast<std::uint32_t>(r % modulo) : static_cast<std::uint32_t>(r >> 32);
    }
    return words;
}

void emit_tree(std::ostream& out, const GeneratorParams& p, unsigned level, unsigned path, unsigned& label_id)
{
    if (level == p.depth) {
        out << "    add r7, r7, " << path + 1 << "\n"
            << "    mul r7, r7, 3\n";
        return;
    }
    const unsigned id = label_id++;
    out << "    and r8, r2, " << (1u << (p.bit_base + level)) << "\n"
        << "    setp.ne p0, r8, 0\n"
        << "    bra p0, T" << id << "\n";
    emit_tree(out, p, level + 1, path * 2, label_id);
    out << "    bra J" << id << "\n"
        << "T" << id << ":\n";
    emit_tree(out, p, level + 1, path * 2 + 1, label_id);
    out << "J" << id << ":\n";
}

std::string kernel_text(const GeneratorSpec& spec, std::uint64_t seed)
{
    const auto& p = spec.params;
    std::mt19937_64 rng(seed);
    std::ostringstream out;
    out << "# " << spec.label() << " seed=" << seed << "\n";
    out << ".grid " << p.threads / p.block << " 1 1\n.block " << p.block << " 1 1\n";

    switch (spec.kind) {
    case KernelClass::UnitStrideCopy: {
        emit_data(out, kInputBase, random_words(rng, std::size_t{p.threads} * p.elements));
        prologue(out);
        out << "    mul r3, r0, 4\n"
            << "    add r4, r3, " << hex(kInputBase) << "\n"
            << "    add r5, r3, " << hex(kOutputBase) << "\n";
        for (unsigned k = 0; k < p.elements; ++k) {
            const std::uint32_t off = k * p.threads * 4;
            if (off == 0) {
                out << "    ld.global r6, [r4]\n    st.global [r5], r6\n";
            } else {
                out << "    ld.global r6, [r4+" << off << "]\n    st.global [r5+" << off << "], r6\n";
            }
        }
        break;
    }
    case KernelClass::BroadcastRead:
        emit_data(out, kInputBase, random_words(rng, 16));
        prologue(out);
        out << "    and r3, r0, 15\n"
            << "    mul r3, r3, 4\n"
            << "    add r3, r3, " << hex(kInputBase) << "\n"
            << "    ld.global r6, [r3]\n"
            << "    mul r4, r0, 4\n"
            << "    add r4, r4, " << hex(kOutputBase) << "\n"
            << "    st.global [r4], r6\n";
        break;
    case KernelClass::RandomGather:
        emit_data(out, kInputBase, random_words(rng, p.threads));
        emit_data(out, kIndexBase, random_words(rng, p.threads, p.threads));
        prologue(out);
        out << "    mul r3, r0, 4\n"
            << "    add r4, r3, " << hex(kIndexBase) << "\n"
            << "    ld.global r5, [r4]\n"
            << "    mul r5, r5, 4\n"
            << "    add r5, r5, " << hex(kInputBase) << "\n"
            << "    ld.global r6, [r5]\n"
            << "    add r7, r3, " << hex(kOutputBase) << "\n"
            << "    st.global [r7], r6\n";
        break;
    case KernelClass::DivergentTree: {
        prologue(out);
        out << "    mov r7, 0\n";
        unsigned label_id = 0;
        emit_tree(out, p, 0, 0, label_id);
        if (p.tree_store) {
            out << "    mul r3, r0, 4\n"
                << "    add r3, r3, " << hex(kOutputBase) << "\n"
                << "    st.global [r3], r7\n";
        }
        break;
    }
    case KernelClass::ComputeLoop:
        prologue(out);
        out << "    mov r7, 0\n"
            << "    mov r9, 0\n"
            << "LOOP:\n"
            << "    add r7, r7, r0\n"
            << "    mul r7, r7, 3\n"
            << "    add r9, r9, 1\n"
            << "    setp.lt p0, r9, " << p.iters << "\n"
            << "    bra p0, LOOP\n";
        break;
    case KernelClass::Mixed:
        emit_data(out, kInputBase, random_words(rng, p.threads));
        emit_data(out, kIndexBase, random_words(rng, p.threads, p.threads));
        prologue(out);
        out << "    mul r3, r0, 4\n"
            << "    add r4, r3, " << hex(kInputBase) << "\n"
            << "    ld.global r6, [r4]\n"
            << "    and r8, r2, 1\n"
            << "    setp.ne p0, r8, 0\n"
            << "    bra p0, ODD\n"
            << "    add r6, r6, 7\n"
            << "    mul r6, r6, 3\n"
            << "    bra JOIN\n"
            << "ODD:\n"
            << "    sub r6, r6, 5\n"
            << "    mul r6, r6, 5\n"
            << "JOIN:\n"
            << "    add r5, r3, " << hex(kIndexBase) << "\n"
            << "    ld.global r9, [r5]\n"
            << "    mul r9, r9, 4\n"
            << "    add r9, r9, " << hex(kInputBase) << "\n"
            << "    ld.global r10, [r9]\n"
            << "    add r6, r6, r10\n"
            << "    mov r11, 0\n"
            << "LOOP:\n"
            << "    add r6, r6, r11\n"
            << "    add r11, r11, 1\n"
            << "    setp.lt p1, r11, " << p.iters << "\n"
            << "    bra p1, LOOP\n"
            << "    add r12, r3, " << hex(kOutputBase) << "\n"
            << "    st.global [r12], r6\n";
        break;
    }
    out << "    exit\n";
    return out.str();
}

} // namespace

std::string_view class_name(KernelClass kind)
{
    switch (kind) {
    case KernelClass::UnitStrideCopy: return "unit_stride_copy";
    case KernelClass::BroadcastRead: return "broadcast_read";
    case KernelClass::RandomGather: return "random_gather";
    case KernelClass::DivergentTree: return "divergent_tree";
    case KernelClass::ComputeLoop: return "compute_loop";
    case KernelClass::Mixed: return "mixed";
    }
    return "?";
}

const std::vector<KernelClass>& all_classes()
{
    static const std::vector<KernelClass> classes = {KernelClass::UnitStrideCopy, KernelClass::BroadcastRead,
                                                     KernelClass::RandomGather,   KernelClass::DivergentTree,
                                                     KernelClass::ComputeLoop,    KernelClass::Mixed};
    return classes;
}

KernelClass parse_class(std::string_view name)
{
    for (KernelClass k : all_classes()) {
        if (class_name(k) == name) return k;
    }
    throw ConfigError("class", "unknown generator class '" + std::string(name) + "'");
}

bool is_generator_spec(std::string_view text)
{
    const std::string_view head = text.substr(0, text.find(':'));
    for (KernelClass k : all_classes()) {
        if (class_name(k) == head) return true;
    }
    return false;
}

std::string GeneratorSpec::label() const
{
    const GeneratorParams d;
    std::string out(class_name(kind));
    auto add = [&](const char* key, unsigned v, unsigned def) {
        if (v != def) out += std::string(":") + key + "=" + std::to_string(v);
    };
    add("threads", params.threads, d.threads);
    add("block", params.block, d.block);
    switch (kind) {
    case KernelClass::UnitStrideCopy: add("elements", params.elements, d.elements); break;
    case KernelClass::DivergentTree:
        add("depth", params.depth, d.depth);
        add("bit_base", params.bit_base, d.bit_base);
        add("store", params.tree_store, d.tree_store);
        break;
    case KernelClass::ComputeLoop:
    case KernelClass::Mixed: add("iters", params.iters, d.iters); break;
    default: break;
    }
    return out;
}

GeneratorSpec parse_generator_spec(std::string_view text)
{
    GeneratorSpec spec;
    std::size_t pos = text.find(':');
    spec.kind = parse_class(text.substr(0, pos));
    bool block_given = false;
    while (pos != std::string_view::npos) {
        const std::size_t next = text.find(':', pos + 1);
        const std::string_view item = text.substr(pos + 1, next == std::string_view::npos ? next : next - pos - 1);
        pos = next;
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("kernel", "expected key=value, got '" + std::string(item) + "'");
        const std::string_view key = item.substr(0, eq);
        const unsigned v = parse_uint(key, item.substr(eq + 1));
        auto& p = spec.params;
        if (key == "threads") p.threads = v;
        else if (key == "block") {
            p.block = v;
            block_given = true;
        }
        else if (key == "elements") p.elements = v;
        else if (key == "depth") p.depth = v;
        else if (key == "bit_base") p.bit_base = v;
        else if (key == "store") p.tree_store = v != 0;
        else if (key == "iters") p.iters = v;
        else throw ConfigError(std::string(key), "unknown generator parameter");
    }
    // Small launches get one block unless a block size was asked for.
    if (!block_given && spec.params.threads < spec.params.block) spec.params.block = spec.params.threads;
    validate(spec);
    return spec;
}

GeneratedKernel generate_kernel(const GeneratorSpec& spec, std::uint64_t seed)
{
    validate(spec);
    GeneratedKernel out;
    out.text = kernel_text(spec, seed);
    out.source = kisa::parse_kernel(out.text);
    return out;
}

kisa::MemoryImage initial_memory(const kisa::KernelSource& source, std::size_t bytes)
{
    kisa::MemoryImage image(bytes);
    image.apply(source.data);
    return image;
}

} // namespace warpsim::driver
