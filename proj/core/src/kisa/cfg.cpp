#include "warpsim/kisa/cfg.hpp"

#include <algorithm>
#include <sstream>

#include "warpsim/error.hpp"
#include "warpsim/kisa/parser.hpp"

namespace warpsim::kisa {

std::size_t Cfg::edge_count() const
{
    std::size_t n = 0;
    for (const auto& s : successors) n += s.size();
    return n;
}

std::vector<std::size_t> Cfg::exit_blocks() const
{
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < size(); ++b) {
        if (successors[b].empty()) out.push_back(b);
    }
    return out;
}

namespace {

std::vector<bool> reachable(const std::vector<std::vector<std::size_t>>& edges, std::size_t root)
{
    std::vector<bool> seen(edges.size(), false);
    std::vector<std::size_t> work{root};
    seen[root] = true;
    while (!work.empty()) {
        std::size_t b = work.back();
        work.pop_back();
        for (std::size_t s : edges[b]) {
            if (!seen[s]) {
                seen[s] = true;
                work.push_back(s);
            }
        }
    }
    return seen;
}

} // namespace

Cfg build_cfg(const Program& program)
{
    const std::size_t n = program.size();
    if (n == 0) throw ValidationError("program is empty");

    std::vector<bool> leader(n + 1, false);
    leader[0] = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& insn = program.instructions[i];
        if (insn.opcode == Opcode::Bra) {
            if (!insn.branch_target || *insn.branch_target >= n) {
                throw ValidationError("branch at " + std::to_string(i) + " has no valid target");
            }
            leader[*insn.branch_target] = true;
            leader[i + 1] = true;
        } else if (insn.opcode == Opcode::Exit) {
            leader[i + 1] = true;
        }
    }

    Cfg cfg;
    cfg.block_of.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (leader[i]) cfg.blocks.push_back({i, i});
        cfg.blocks.back().end = i + 1;
        cfg.block_of[i] = cfg.blocks.size() - 1;
    }

    cfg.successors.resize(cfg.blocks.size());
    cfg.predecessors.resize(cfg.blocks.size());
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        const std::size_t last = cfg.blocks[b].end - 1;
        const auto& insn = program.instructions[last];
        auto& succ = cfg.successors[b];
        auto fall_through = [&] {
            if (last + 1 >= n) {
                throw ValidationError("control falls off the end of the program after instruction " +
                                      std::to_string(last));
            }
            return cfg.block_of[last + 1];
        };
        if (insn.opcode == Opcode::Exit) continue;
        if (insn.opcode == Opcode::Bra) {
            succ.push_back(cfg.block_of[*insn.branch_target]);
            if (!is_unconditional_branch(insn)) {
                std::size_t ft = fall_through();
                if (ft != succ.front()) succ.push_back(ft);
            }
        } else {
            succ.push_back(fall_through());
        }
    }
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        for (std::size_t s : cfg.successors[b]) cfg.predecessors[s].push_back(b);
    }

    // Every block the entry can reach must itself be able to reach an exit.
    const auto from_entry = reachable(cfg.successors, 0);
    std::vector<bool> to_exit(cfg.blocks.size(), false);
    for (std::size_t e : cfg.exit_blocks()) {
        const auto r = reachable(cfg.predecessors, e);
        for (std::size_t b = 0; b < r.size(); ++b) to_exit[b] = to_exit[b] || r[b];
    }
    for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
        if (from_entry[b] && !to_exit[b]) {
            throw ValidationError("no path from instruction " + std::to_string(cfg.blocks[b].start) +
                                  " reaches an exit");
        }
    }
    return cfg;
}

IpdomTable compute_ipdom(const Cfg& cfg)
{
    const std::size_t n = cfg.size();
    const auto from_entry = n ? reachable(cfg.successors, 0) : std::vector<bool>{};
    std::vector<std::size_t> exits;
    for (std::size_t e : cfg.exit_blocks()) {
        if (from_entry[e]) exits.push_back(e);
    }
    if (exits.size() != 1) {
        throw ValidationError("expected exactly one reachable exit block, found " + std::to_string(exits.size()));
    }
    const std::size_t root = exits.front();

    // Postorder of the reverse CFG rooted at the exit.
    std::vector<std::size_t> order;
    std::vector<std::size_t> number(n, kNoBlock);
    {
        std::vector<bool> seen(n, false);
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        seen[root] = true;
        while (!stack.empty()) {
            auto& [b, next] = stack.back();
            if (next < cfg.predecessors[b].size()) {
                std::size_t p = cfg.predecessors[b][next++];
                if (!seen[p]) {
                    seen[p] = true;
                    stack.push_back({p, 0});
                }
            } else {
                number[b] = order.size();
                order.push_back(b);
                stack.pop_back();
            }
        }
    }

    std::vector<std::size_t> idom(n, kNoBlock);
    idom[root] = root;
    auto intersect = [&](std::size_t a, std::size_t b) {
        while (a != b) {
            while (number[a] < number[b]) a = idom[a];
            while (number[b] < number[a]) b = idom[b];
        }
        return a;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t b = *it;
            if (b == root) continue;
            std::size_t new_idom = kNoBlock;
            for (std::size_t s : cfg.successors[b]) {
                if (idom[s] == kNoBlock) continue;
                new_idom = new_idom == kNoBlock ? s : intersect(s, new_idom);
            }
            if (new_idom != idom[b]) {
                idom[b] = new_idom;
                changed = true;
            }
        }
    }

    IpdomTable table;
    table.ipdom = std::move(idom);
    table.ipdom[root] = kNoBlock;
    return table;
}

KernelAnalysis KernelAnalysis::of(const Program& program)
{
    KernelAnalysis a;
    a.cfg = build_cfg(program);
    a.ipdom = compute_ipdom(a.cfg);
    a.reconv_pc.assign(program.size(), kNoBlock);
    for (std::size_t pc = 0; pc < program.size(); ++pc) {
        if (program.instructions[pc].opcode != Opcode::Bra) continue;
        if (auto pd = a.ipdom.of(a.cfg.block_of[pc])) a.reconv_pc[pc] = a.cfg.blocks[*pd].start;
    }
    return a;
}

std::string describe(const Program& program, const Cfg& cfg, const IpdomTable& table)
{
    std::ostringstream out;
    out << "blocks: " << cfg.size() << ", edges: " << cfg.edge_count() << '\n';
    for (std::size_t b = 0; b < cfg.size(); ++b) {
        const auto& blk = cfg.blocks[b];
        out << "B" << b << " [" << blk.start << ", " << blk.end - 1 << "]";
        out << " succ={";
        for (std::size_t i = 0; i < cfg.successors[b].size(); ++i) {
            out << (i ? "," : "") << "B" << cfg.successors[b][i];
        }
        out << "} ipdom=";
        if (auto p = table.of(b)) out << "B" << *p;
        else out << "-";
        out << '\n';
        for (std::size_t i = blk.start; i < blk.end; ++i) {
            out << "    " << i << ": " << format_instruction(program.instructions[i]) << '\n';
        }
    }
    return out.str();
}

} // namespace warpsim::kisa
