#include "warpsim/kisa/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "warpsim/error.hpp"

namespace warpsim::kisa {
namespace {

struct Token {
    enum class Kind { Word, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::int64_t number = 0;
    std::size_t column = 0; // 1-based
};

bool is_word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%' || c == '.'; }
bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '%'; }

class LineLexer {
public:
    LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) { advance(); }

    const Token& peek() const { return current_; }

    Token take()
    {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(std::size_t column, const std::string& what) const { throw ParseError(line_no_, column, what); }
    [[noreturn]] void fail_here(const std::string& what) const { fail(current_.column, what); }

    bool accept(char punct)
    {
        if (current_.kind == Token::Kind::Punct && current_.text[0] == punct) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char punct)
    {
        if (!accept(punct)) fail_here(std::string("expected '") + punct + "'" + found());
    }

    std::string found() const
    {
        if (current_.kind == Token::Kind::End) return ", found end of line";
        return ", found '" + current_.text + "'";
    }

    bool at_end() const { return current_.kind == Token::Kind::End; }

    std::size_t line_no() const { return line_no_; }

private:
    void advance()
    {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        current_ = Token{};
        current_.column = pos_ + 1;
        if (pos_ >= line_.size()) return;

        const char c = line_[pos_];
        const bool signed_number = (c == '-' && pos_ + 1 < line_.size() &&
                                    std::isdigit(static_cast<unsigned char>(line_[pos_ + 1])));
        if (std::isdigit(static_cast<unsigned char>(c)) || signed_number) {
            lex_number();
        } else if (is_word_start(c)) {
            std::size_t start = pos_;
            while (pos_ < line_.size() && is_word_char(line_[pos_])) ++pos_;
            current_.kind = Token::Kind::Word;
            current_.text = std::string(line_.substr(start, pos_ - start));
        } else if (c == ',' || c == '[' || c == ']' || c == '+' || c == '-' || c == ':') {
            current_.kind = Token::Kind::Punct;
            current_.text = std::string(1, c);
            ++pos_;
        } else {
            fail(pos_ + 1, std::string("unexpected character '") + c + "'");
        }
    }

    void lex_number()
    {
        const std::size_t start = pos_;
        bool negative = false;
        if (line_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        int base = 10;
        if (pos_ + 1 < line_.size() && line_[pos_] == '0' && (line_[pos_ + 1] == 'x' || line_[pos_ + 1] == 'X')) {
            base = 16;
            pos_ += 2;
        }
        const std::size_t digits = pos_;
        while (pos_ < line_.size() && std::isalnum(static_cast<unsigned char>(line_[pos_]))) ++pos_;
        std::uint64_t magnitude = 0;
        const char* first = line_.data() + digits;
        const char* last = line_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, magnitude, base);
        if (digits == pos_ || ec != std::errc{} || ptr != last || magnitude > 0xFFFFFFFFull) {
            fail(start + 1, "malformed integer '" + std::string(line_.substr(start, pos_ - start)) + "'");
        }
        current_.kind = Token::Kind::Number;
        current_.text = std::string(line_.substr(start, pos_ - start));
        current_.number = negative ? -static_cast<std::int64_t>(magnitude) : static_cast<std::int64_t>(magnitude);
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
    Token current_;
};

// Immediates may be written as signed 32-bit values or as 32-bit hex patterns.
std::int32_t to_imm(LineLexer& lex, const Token& t)
{
    if (t.number < INT32_MIN || t.number > static_cast<std::int64_t>(UINT32_MAX)) {
        lex.fail(t.column, "immediate '" + t.text + "' does not fit in 32 bits");
    }
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(t.number & 0xFFFFFFFF));
}

std::optional<unsigned> indexed_name(std::string_view word, char prefix)
{
    if (word.size() < 2 || word[0] != prefix) return std::nullopt;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size()) return std::nullopt;
    if (word.size() > 2 && word[1] == '0') return std::nullopt;
    return value;
}

unsigned parse_reg(LineLexer& lex)
{
    const Token t = lex.take();
    if (t.kind == Token::Kind::Word) {
        if (auto id = indexed_name(t.text, 'r')) {
            if (*id >= kRegisterCount) lex.fail(t.column, "register id out of range: " + t.text);
            return *id;
        }
    }
    lex.fail(t.column, "expected register" + std::string(t.kind == Token::Kind::End ? ", found end of line" : ", found '" + t.text + "'"));
}

unsigned parse_pred(LineLexer& lex)
{
    const Token t = lex.take();
    if (t.kind == Token::Kind::Word) {
        if (auto id = indexed_name(t.text, 'p')) {
            if (*id >= kPredicateCount) lex.fail(t.column, "predicate id out of range: " + t.text);
            return *id;
        }
    }
    lex.fail(t.column, "expected predicate" + std::string(t.kind == Token::Kind::End ? ", found end of line" : ", found '" + t.text + "'"));
}

Operand parse_value(LineLexer& lex, bool allow_special)
{
    const Token& t = lex.peek();
    if (t.kind == Token::Kind::Number) {
        Token n = lex.take();
        return Operand::imm(to_imm(lex, n));
    }
    if (t.kind == Token::Kind::Word && t.text[0] == '%') {
        Token w = lex.take();
        if (!allow_special) lex.fail(w.column, "special register only allowed in mov");
        if (w.text == "%tid") return Operand::special(Special::Tid);
        if (w.text == "%ctaid") return Operand::special(Special::Ctaid);
        if (w.text == "%ntid") return Operand::special(Special::Ntid);
        lex.fail(w.column, "unknown special register " + w.text);
    }
    return Operand::reg(parse_reg(lex));
}

void parse_address(LineLexer& lex, Instruction& insn)
{
    lex.expect('[');
    insn.srcs.push_back(Operand::reg(parse_reg(lex)));
    insn.mem_offset = 0;
    if (lex.accept('+')) {
        Token t = lex.take();
        if (t.kind != Token::Kind::Number) lex.fail(t.column, "expected offset");
        insn.mem_offset = to_imm(lex, t);
    } else if (lex.accept('-')) {
        Token t = lex.take();
        if (t.kind != Token::Kind::Number || t.number < 0) lex.fail(t.column, "expected offset");
        insn.mem_offset = to_imm(lex, Token{t.kind, t.text, -t.number, t.column});
    } else if (lex.peek().kind == Token::Kind::Number && lex.peek().number < 0) {
        // "[r1-4]" lexes as register then a negative number.
        Token t = lex.take();
        insn.mem_offset = to_imm(lex, t);
    }
    lex.expect(']');
}

struct PendingInsn {
    Instruction insn;
    std::size_t line = 0;
    std::size_t target_column = 0;
};

Instruction parse_instruction(LineLexer& lex, const Token& op, std::size_t& target_column)
{
    Instruction insn;
    const std::string& name = op.text;
    auto alu = [&](Opcode code) {
        insn.opcode = code;
        insn.dst = Operand::reg(parse_reg(lex));
        lex.expect(',');
        insn.srcs.push_back(Operand::reg(parse_reg(lex)));
        lex.expect(',');
        insn.srcs.push_back(parse_value(lex, false));
    };

    if (name == "mov") {
        insn.opcode = Opcode::Mov;
        insn.dst = Operand::reg(parse_reg(lex));
        lex.expect(',');
        insn.srcs.push_back(parse_value(lex, true));
    } else if (name == "add") {
        alu(Opcode::Add);
    } else if (name == "sub") {
        alu(Opcode::Sub);
    } else if (name == "mul") {
        alu(Opcode::Mul);
    } else if (name == "and") {
        alu(Opcode::And);
    } else if (name == "shr") {
        alu(Opcode::Shr);
    } else if (name.rfind("setp.", 0) == 0) {
        insn.opcode = Opcode::Setp;
        const std::string cmp = name.substr(5);
        if (cmp == "eq") insn.cmp = CmpOp::Eq;
        else if (cmp == "ne") insn.cmp = CmpOp::Ne;
        else if (cmp == "lt") insn.cmp = CmpOp::Lt;
        else if (cmp == "ge") insn.cmp = CmpOp::Ge;
        else lex.fail(op.column, "unknown comparison '" + cmp + "'");
        insn.dst = Operand::pred(parse_pred(lex));
        lex.expect(',');
        insn.srcs.push_back(Operand::reg(parse_reg(lex)));
        lex.expect(',');
        insn.srcs.push_back(parse_value(lex, false));
    } else if (name == "bra") {
        insn.opcode = Opcode::Bra;
        const Token& t = lex.peek();
        if (t.kind == Token::Kind::Word && indexed_name(t.text, 'p')) {
            insn.srcs.push_back(Operand::pred(parse_pred(lex)));
            lex.expect(',');
        }
        Token label = lex.take();
        if (label.kind != Token::Kind::Word || label.text[0] == '%' || label.text[0] == '.') {
            lex.fail(label.column, "expected branch label");
        }
        insn.target_label = label.text;
        target_column = label.column;
    } else if (name == "ld.global") {
        insn.opcode = Opcode::LdGlobal;
        insn.dst = Operand::reg(parse_reg(lex));
        lex.expect(',');
        parse_address(lex, insn);
    } else if (name == "st.global") {
        insn.opcode = Opcode::StGlobal;
        parse_address(lex, insn);
        lex.expect(',');
        insn.srcs.push_back(Operand::reg(parse_reg(lex)));
    } else if (name == "bar.sync") {
        insn.opcode = Opcode::BarSync;
    } else if (name == "exit") {
        insn.opcode = Opcode::Exit;
    } else {
        lex.fail(op.column, "unknown opcode '" + name + "'");
    }
    if (!lex.at_end()) lex.fail_here("unexpected trailing input '" + lex.peek().text + "'");
    return insn;
}

Dim3 parse_dim(LineLexer& lex)
{
    std::uint32_t v[3] = {1, 1, 1};
    for (int i = 0; i < 3 && !lex.at_end(); ++i) {
        lex.accept(',');
        Token t = lex.take();
        if (t.kind != Token::Kind::Number || t.number <= 0) lex.fail(t.column, "expected positive dimension");
        v[i] = static_cast<std::uint32_t>(t.number);
    }
    if (!lex.at_end()) lex.fail_here("too many dimensions");
    return {v[0], v[1], v[2]};
}

void parse_directive(LineLexer& lex, const Token& name, KernelSource& out)
{
    if (name.text == ".grid" || name.text == ".block") {
        if (!out.launch) out.launch = LaunchConfig{};
        (name.text == ".grid" ? out.launch->grid : out.launch->block) = parse_dim(lex);
    } else if (name.text == ".data") {
        Token addr = lex.take();
        if (addr.kind != Token::Kind::Number || addr.number < 0) lex.fail(addr.column, "expected data address");
        DataBlock block;
        block.address = static_cast<std::uint32_t>(addr.number);
        while (!lex.at_end()) {
            Token w = lex.take();
            if (w.kind != Token::Kind::Number) lex.fail(w.column, "expected data word");
            block.words.push_back(static_cast<std::uint32_t>(to_imm(lex, w)));
        }
        if (!out.data.empty() && out.data.back().address + 4 * out.data.back().words.size() == block.address) {
            auto& prev = out.data.back().words;
            prev.insert(prev.end(), block.words.begin(), block.words.end());
        } else {
            out.data.push_back(std::move(block));
        }
    } else {
        lex.fail(name.column, "unknown directive '" + name.text + "'");
    }
}

} // namespace

KernelSource parse_kernel(std::string_view text)
{
    KernelSource out;
    std::vector<PendingInsn> pending;
    std::map<std::string, std::pair<std::size_t, std::size_t>> label_sites; // name -> (line, column)
    std::vector<std::string> unbound_labels;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        LineLexer lex(line, line_no);
        while (!lex.at_end()) {
            Token head = lex.take();
            if (head.kind != Token::Kind::Word) lex.fail(head.column, "expected label or opcode, found '" + head.text + "'");
            if (head.text[0] == '.') {
                if (!unbound_labels.empty()) lex.fail(head.column, "label cannot precede a directive");
                parse_directive(lex, head, out);
                break;
            }
            if (lex.accept(':')) {
                if (head.text[0] == '%') lex.fail(head.column, "invalid label name '" + head.text + "'");
                if (label_sites.count(head.text)) lex.fail(head.column, "duplicate label '" + head.text + "'");
                label_sites[head.text] = {line_no, head.column};
                unbound_labels.push_back(head.text);
                continue;
            }
            std::size_t target_column = 0;
            Instruction insn = parse_instruction(lex, head, target_column);
            for (auto& l : unbound_labels) out.program.labels[l] = pending.size();
            unbound_labels.clear();
            pending.push_back({std::move(insn), line_no, target_column});
            break;
        }
        if (eol == text.size()) break;
    }
    if (!unbound_labels.empty()) {
        const auto& site = label_sites[unbound_labels.front()];
        throw ParseError(site.first, site.second, "label '" + unbound_labels.front() + "' is not followed by an instruction");
    }

    for (auto& p : pending) {
        if (p.insn.opcode == Opcode::Bra) {
            auto it = out.program.labels.find(p.insn.target_label);
            if (it == out.program.labels.end()) {
                throw ParseError(p.line, p.target_column, "undefined label '" + p.insn.target_label + "'");
            }
            p.insn.branch_target = it->second;
        }
        out.program.instructions.push_back(std::move(p.insn));
    }
    return out;
}

Program parse_program(std::string_view text) { return parse_kernel(text).program; }

namespace {

std::string format_operand(const Operand& op)
{
    switch (op.kind) {
    case Operand::Kind::Reg: return "r" + std::to_string(op.value);
    case Operand::Kind::Pred: return "p" + std::to_string(op.value);
    case Operand::Kind::Imm: return std::to_string(op.value);
    case Operand::Kind::Special: return std::string(special_name(static_cast<Special>(op.value)));
    }
    return "?";
}

std::string format_address(const Instruction& insn)
{
    std::string s = "[" + format_operand(insn.srcs.at(0));
    if (insn.mem_offset > 0) s += "+" + std::to_string(insn.mem_offset);
    if (insn.mem_offset < 0) s += std::to_string(insn.mem_offset);
    return s + "]";
}

} // namespace

std::string format_instruction(const Instruction& insn)
{
    std::string s;
    switch (insn.opcode) {
    case Opcode::Mov:
        s = "mov " + format_operand(*insn.dst) + ", " + format_operand(insn.srcs.at(0));
        break;
    case Opcode::Add:
    case Opcode::Sub:
    case Opcode::Mul:
    case Opcode::And:
    case Opcode::Shr:
        s = std::string(opcode_name(insn.opcode)) + " " + format_operand(*insn.dst) + ", " +
            format_operand(insn.srcs.at(0)) + ", " + format_operand(insn.srcs.at(1));
        break;
    case Opcode::Setp:
        s = "setp." + std::string(cmp_name(insn.cmp)) + " " + format_operand(*insn.dst) + ", " +
            format_operand(insn.srcs.at(0)) + ", " + format_operand(insn.srcs.at(1));
        break;
    case Opcode::Bra:
        s = "bra ";
        if (!insn.srcs.empty()) s += format_operand(insn.srcs[0]) + ", ";
        s += insn.target_label;
        break;
    case Opcode::LdGlobal:
        s = "ld.global " + format_operand(*insn.dst) + ", " + format_address(insn);
        break;
    case Opcode::StGlobal:
        s = "st.global " + format_address(insn) + ", " + format_operand(insn.srcs.at(1));
        break;
    case Opcode::BarSync: s = "bar.sync"; break;
    case Opcode::Exit: s = "exit"; break;
    }
    return s;
}

std::string unparse(const Program& program)
{
    std::vector<std::vector<std::string>> labels_at(program.size());
    for (const auto& [name, index] : program.labels) labels_at.at(index).push_back(name);

    std::ostringstream out;
    for (std::size_t i = 0; i < program.size(); ++i) {
        for (const auto& l : labels_at[i]) out << l << ": ";
        out << format_instruction(program.instructions[i]) << '\n';
    }
    return out.str();
}

std::string unparse(const KernelSource& source)
{
    std::ostringstream out;
    if (source.launch) {
        const auto& g = source.launch->grid;
        const auto& b = source.launch->block;
        out << ".grid " << g.x << ' ' << g.y << ' ' << g.z << '\n';
        out << ".block " << b.x << ' ' << b.y << ' ' << b.z << '\n';
    }
    constexpr std::size_t kWordsPerLine = 8;
    for (const auto& block : source.data) {
        for (std::size_t i = 0; i < block.words.size(); i += kWordsPerLine) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "0x%08x", static_cast<unsigned>(block.address + 4 * i));
            out << ".data " << buf;
            for (std::size_t j = i; j < std::min(block.words.size(), i + kWordsPerLine); ++j) {
                out << ' ' << block.words[j];
            }
            out << '\n';
        }
    }
    out << unparse(source.program);
    return out.str();
}

} // namespace warpsim::kisa
