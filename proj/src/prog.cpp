#include "termlab/prog.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <utility>

#include "termlab/measure.hpp"

namespace termlab {

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in addition");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in multiplication");
    return r;
}

long long floor_div(long long a, long long b) {
    long long q = a / b;
    long long r = a % b;
    if (r != 0 && (r < 0) != (b < 0)) --q;
    return q;
}

long long Affine::eval(const StateVector& s) const {
    long long acc = constant;
    for (size_t v = 0; v < coeffs.size(); ++v) {
        if (coeffs[v] == 0) continue;
        acc = checked_add(acc, checked_mul(coeffs[v], s[v]));
    }
    return acc;
}

bool Affine::is_zero() const {
    if (constant != 0) return false;
    return std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; });
}

int Program::var_index(const std::string& v) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == v) return static_cast<int>(i);
    return -1;
}

std::optional<long long> Program::guard_lower(int var) const {
    std::optional<long long> lower;
    for (const GuardAtom& a : guard) {
        if (a.var != var) continue;
        long long lo = a.cmp == Cmp::Gt ? checked_add(a.bound, 1) : a.bound;
        if (!lower || lo > *lower) lower = lo;
    }
    return lower;
}

bool guard_holds(const Program& p, const StateVector& s) {
    for (const GuardAtom& a : p.guard) {
        long long v = s[a.var];
        if (a.cmp == Cmp::Gt ? v <= a.bound : v < a.bound) return false;
    }
    return true;
}

int input_arity(const Case& c) {
    int n = 0;
    for (const Update& u : c.updates)
        if (std::holds_alternative<InputAny>(u.rhs) || std::holds_alternative<InputAtLeast>(u.rhs)) ++n;
    return n;
}

void apply_case(const Program& p, const StateVector& s, int case_id,
                const std::vector<long long>& inputs, StateVector& out) {
    if (case_id < 1 || case_id > static_cast<int>(p.cases.size()))
        throw Error("unknown case " + std::to_string(case_id));
    const Case& c = p.cases[case_id - 1];
    if (!guard_holds(p, s)) throw Error("guard does not hold in the pre-state");
    if (static_cast<int>(inputs.size()) != input_arity(c))
        throw Error("case " + std::to_string(case_id) + " expects " +
                    std::to_string(input_arity(c)) + " input value(s), got " +
                    std::to_string(inputs.size()));
    out.assign(s.begin(), s.end());
    size_t next_input = 0;
    for (const Update& u : c.updates) {
        long long value;
        if (const Affine* a = std::get_if<Affine>(&u.rhs)) {
            value = a->eval(s);
        } else if (std::get_if<InputAny>(&u.rhs)) {
            value = inputs[next_input++];
        } else if (const InputAtLeast* in = std::get_if<InputAtLeast>(&u.rhs)) {
            value = inputs[next_input++];
            long long lower = in->lower.eval(s);
            if (value < lower)
                throw Error("input " + std::to_string(value) + " for " + p.vars[u.var] +
                            " is below its lower bound " + std::to_string(lower));
        } else {
            const DivByConst& d = std::get<DivByConst>(u.rhs);
            value = floor_div(s[d.var], d.divisor);
        }
        out[u.var] = value;
    }
}

StateVector successors(const Program& p, const StateVector& s, int case_id,
                       const std::vector<long long>& inputs) {
    StateVector out;
    apply_case(p, s, case_id, inputs, out);
    return out;
}

std::optional<long long> guard_sup(const Program& p, const Affine& a) {
    long long acc = a.constant;
    for (size_t v = 0; v < a.coeffs.size(); ++v) {
        long long c = a.coeffs[v];
        if (c == 0) continue;
        if (c > 0) return std::nullopt;
        auto lower = p.guard_lower(static_cast<int>(v));
        if (!lower) return std::nullopt;
        acc = checked_add(acc, checked_mul(c, *lower));
    }
    return acc;
}

std::optional<long long> guard_inf(const Program& p, const Affine& a) {
    long long acc = a.constant;
    for (size_t v = 0; v < a.coeffs.size(); ++v) {
        long long c = a.coeffs[v];
        if (c == 0) continue;
        if (c < 0) return std::nullopt;
        auto lower = p.guard_lower(static_cast<int>(v));
        if (!lower) return std::nullopt;
        acc = checked_add(acc, checked_mul(c, *lower));
    }
    return acc;
}

namespace {

enum class TokKind { Ident, Int, Assign, Colon, Gt, Ge, Plus, Minus, Star, LParen, RParen, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    long long number = 0;
    int column = 0;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {"program", "vars", "while", "and",
                                             "case",    "input", "div",  "int"};
    return kw;
}

std::vector<Token> lex_line(const std::string& line, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char ch = line[i];
        int col = static_cast<int>(i) + 1;
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch == '#') break;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                ++j;
            out.push_back({TokKind::Ident, line.substr(i, j - i), 0, col});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            std::string digits = line.substr(i, j - i);
            long long value = 0;
            try {
                value = std::stoll(digits);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range", lineno, col);
            }
            out.push_back({TokKind::Int, digits, value, col});
            i = j;
            continue;
        }
        if (ch == ':' && i + 1 < line.size() && line[i + 1] == '=') {
            out.push_back({TokKind::Assign, ":=", 0, col});
            i += 2;
            continue;
        }
        if (ch == '>' && i + 1 < line.size() && line[i + 1] == '=') {
            out.push_back({TokKind::Ge, ">=", 0, col});
            i += 2;
            continue;
        }
        switch (ch) {
            case ':': out.push_back({TokKind::Colon, ":", 0, col}); break;
            case '>': out.push_back({TokKind::Gt, ">", 0, col}); break;
            case '+': out.push_back({TokKind::Plus, "+", 0, col}); break;
            case '-': out.push_back({TokKind::Minus, "-", 0, col}); break;
            case '*': out.push_back({TokKind::Star, "*", 0, col}); break;
            case '(': out.push_back({TokKind::LParen, "(", 0, col}); break;
            case ')': out.push_back({TokKind::RParen, ")", 0, col}); break;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", lineno, col);
        }
        ++i;
    }
    out.push_back({TokKind::End, "", 0, static_cast<int>(line.size()) + 1});
    return out;
}

// One logical line of tokens plus a cursor.
struct LineParser {
    std::vector<Token> toks;
    size_t pos = 0;
    int lineno = 0;

    const Token& peek() const { return toks[pos]; }
    const Token& get() { return toks[pos + 1 < toks.size() ? pos++ : pos]; }
    bool at_end() const { return peek().kind == TokKind::End; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, lineno, peek().column);
    }

    Token expect(TokKind k, const std::string& what) {
        if (peek().kind != k) fail("expected " + what);
        return toks[pos++];
    }

    bool is_keyword(const std::string& kw) const {
        return peek().kind == TokKind::Ident && peek().text == kw;
    }

    std::string expect_new_ident() {
        Token t = expect(TokKind::Ident, "an identifier");
        if (keywords().count(t.text))
            throw ParseError("'" + t.text + "' is a reserved word", lineno, t.column);
        return t.text;
    }

    long long expect_int(bool allow_negative) {
        bool neg = false;
        if (allow_negative && peek().kind == TokKind::Minus) {
            ++pos;
            neg = true;
        }
        Token t = expect(TokKind::Int, "an integer");
        return neg ? checked_mul(t.number, -1) : t.number;
    }
};

int resolve_var(const Program& p, LineParser& lp, const Token& t) {
    int idx = p.var_index(t.text);
    if (idx < 0)
        throw ParseError("undeclared variable '" + t.text + "'", lp.lineno, t.column);
    return idx;
}

// affine := ["-"] term (("+"|"-") term)* ; term := INT | IDENT | INT "*" IDENT
Affine parse_affine_tokens(const Program& p, LineParser& lp) {
    Affine a;
    a.coeffs.assign(p.vars.size(), 0);
    long long sign = 1;
    if (lp.peek().kind == TokKind::Minus) {
        lp.get();
        sign = -1;
    }
    for (;;) {
        if (lp.peek().kind == TokKind::Int) {
            Token num = lp.get();
            if (lp.peek().kind == TokKind::Star) {
                lp.get();
                Token var = lp.expect(TokKind::Ident, "a variable after '*'");
                int idx = resolve_var(p, lp, var);
                a.coeffs[idx] = checked_add(a.coeffs[idx], checked_mul(sign, num.number));
            } else {
                a.constant = checked_add(a.constant, checked_mul(sign, num.number));
            }
        } else if (lp.peek().kind == TokKind::Ident && !keywords().count(lp.peek().text)) {
            Token var = lp.get();
            int idx = resolve_var(p, lp, var);
            a.coeffs[idx] = checked_add(a.coeffs[idx], sign);
        } else {
            lp.fail("expected a term");
        }
        if (lp.peek().kind == TokKind::Plus) {
            lp.get();
            sign = 1;
        } else if (lp.peek().kind == TokKind::Minus) {
            lp.get();
            sign = -1;
        } else {
            break;
        }
    }
    return a;
}

UpdateRhs parse_rhs(const Program& p, LineParser& lp) {
    if (lp.is_keyword("input")) {
        lp.get();
        if (lp.peek().kind != TokKind::LParen) return InputAny{};
        lp.get();
        lp.expect(TokKind::Ge, "'>='");
        Affine lower = parse_affine_tokens(p, lp);
        lp.expect(TokKind::RParen, "')'");
        return InputAtLeast{std::move(lower)};
    }
    // IDENT "div" INT needs two tokens of lookahead to distinguish from an affine.
    if (lp.peek().kind == TokKind::Ident && !keywords().count(lp.peek().text) &&
        lp.pos + 1 < lp.toks.size() && lp.toks[lp.pos + 1].kind == TokKind::Ident &&
        lp.toks[lp.pos + 1].text == "div") {
        Token var = lp.get();
        int idx = resolve_var(p, lp, var);
        lp.get();  // div
        Token d = lp.expect(TokKind::Int, "a divisor");
        if (d.number < 2)
            throw ParseError("divisor must be at least 2", lp.lineno, d.column);
        return DivByConst{idx, d.number};
    }
    return parse_affine_tokens(p, lp);
}

struct SourceLine {
    std::string text;
    int number = 0;
};

std::vector<SourceLine> logical_lines(const std::string& text) {
    std::vector<SourceLine> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        size_t hash = line.find('#');
        std::string body = hash == std::string::npos ? line : line.substr(0, hash);
        if (body.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back({line, n});
    }
    return out;
}

}  // namespace

Program parse_program(const std::string& text) {
    std::vector<SourceLine> lines = logical_lines(text);
    size_t li = 0;
    auto next_line = [&](const std::string& what) -> LineParser {
        if (li >= lines.size())
            throw ParseError("unexpected end of input, expected " + what,
                             lines.empty() ? 1 : lines.back().number + 1, 1);
        LineParser lp{lex_line(lines[li].text, lines[li].number), 0, lines[li].number};
        ++li;
        return lp;
    };

    Program p;
    {
        LineParser lp = next_line("'program'");
        if (!lp.is_keyword("program")) lp.fail("expected 'program'");
        lp.get();
        p.name = lp.expect_new_ident();
        if (!lp.at_end()) lp.fail("trailing tokens after program name");
    }
    {
        LineParser lp = next_line("'vars'");
        if (!lp.is_keyword("vars")) lp.fail("expected 'vars'");
        lp.get();
        while (lp.peek().kind == TokKind::Ident && !lp.is_keyword("int")) {
            Token t = lp.peek();
            std::string v = lp.expect_new_ident();
            if (p.var_index(v) >= 0)
                throw ParseError("duplicate variable '" + v + "'", lp.lineno, t.column);
            p.vars.push_back(v);
        }
        if (p.vars.empty()) lp.fail("expected at least one variable");
        lp.expect(TokKind::Colon, "':'");
        if (!lp.is_keyword("int")) lp.fail("expected 'int'");
        lp.get();
        if (!lp.at_end()) lp.fail("trailing tokens after variable declarations");
    }
    {
        LineParser lp = next_line("'while'");
        if (!lp.is_keyword("while")) lp.fail("expected 'while'");
        lp.get();
        for (;;) {
            Token var = lp.expect(TokKind::Ident, "a variable");
            GuardAtom atom;
            atom.var = resolve_var(p, lp, var);
            if (lp.peek().kind == TokKind::Gt)
                atom.cmp = Cmp::Gt;
            else if (lp.peek().kind == TokKind::Ge)
                atom.cmp = Cmp::Ge;
            else
                lp.fail("expected '>' or '>='");
            lp.get();
            atom.bound = lp.expect_int(true);
            p.guard.push_back(atom);
            if (lp.is_keyword("and")) {
                lp.get();
                continue;
            }
            break;
        }
        if (!lp.at_end()) lp.fail("trailing tokens after guard");
    }
    while (li < lines.size()) {
        LineParser lp = next_line("'case'");
        if (!lp.is_keyword("case")) lp.fail("expected 'case'");
        Token kw = lp.get();
        long long id = lp.expect_int(false);
        if (id != static_cast<long long>(p.cases.size()) + 1)
            throw ParseError("case ids must be consecutive from 1; expected " +
                                 std::to_string(p.cases.size() + 1),
                             lp.lineno, kw.column);
        lp.expect(TokKind::Colon, "':'");
        if (!lp.at_end()) lp.fail("trailing tokens after case header");

        Case c;
        c.id = static_cast<int>(id);
        while (li < lines.size()) {
            LineParser ul{lex_line(lines[li].text, lines[li].number), 0, lines[li].number};
            if (ul.is_keyword("case")) break;
            ++li;
            Token var = ul.expect(TokKind::Ident, "a variable");
            Update u;
            u.var = resolve_var(p, ul, var);
            for (const Update& prev : c.updates)
                if (prev.var == u.var)
                    throw ParseError("variable '" + var.text + "' updated twice in case " +
                                         std::to_string(c.id),
                                     ul.lineno, var.column);
            ul.expect(TokKind::Assign, "':='");
            u.rhs = parse_rhs(p, ul);
            if (!ul.at_end()) ul.fail("trailing tokens after update");
            c.updates.push_back(std::move(u));
        }
        if (c.updates.empty())
            throw ParseError("case " + std::to_string(c.id) + " has no updates", lp.lineno,
                             kw.column);
        p.cases.push_back(std::move(c));
    }
    if (p.cases.empty()) {
        int last = lines.empty() ? 1 : lines.back().number;
        throw ParseError("expected at least one case", last, 1);
    }
    return p;
}

Affine parse_affine(const Program& p, const std::string& text) {
    LineParser lp{lex_line(text, 1), 0, 1};
    Affine a = parse_affine_tokens(p, lp);
    if (!lp.at_end()) lp.fail("trailing tokens after expression");
    return a;
}

std::string print_affine(const Program& p, const Affine& a) {
    std::string out;
    for (size_t v = 0; v < a.coeffs.size(); ++v) {
        long long c = a.coeffs[v];
        if (c == 0) continue;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        unsigned long long mag = c < 0 ? -static_cast<unsigned long long>(c)
                                       : static_cast<unsigned long long>(c);
        if (mag != 1) out += std::to_string(mag) + "*";
        out += p.vars[v];
    }
    if (out.empty()) return std::to_string(a.constant);
    if (a.constant != 0) {
        unsigned long long mag = a.constant < 0 ? -static_cast<unsigned long long>(a.constant)
                                                : static_cast<unsigned long long>(a.constant);
        out += (a.constant < 0 ? " - " : " + ") + std::to_string(mag);
    }
    return out;
}

std::string pretty_print(const Program& p) {
    std::ostringstream out;
    out << "program " << p.name << "\n";
    out << "vars";
    for (const std::string& v : p.vars) out << " " << v;
    out << " : int\n";
    out << "while";
    for (size_t i = 0; i < p.guard.size(); ++i) {
        const GuardAtom& a = p.guard[i];
        out << (i == 0 ? " " : " and ") << p.vars[a.var]
            << (a.cmp == Cmp::Gt ? " > " : " >= ") << a.bound;
    }
    out << "\n";
    for (const Case& c : p.cases) {
        out << "case " << c.id << ":\n";
        for (const Update& u : c.updates) {
            out << "  " << p.vars[u.var] << " := ";
            if (const Affine* a = std::get_if<Affine>(&u.rhs)) {
                out << print_affine(p, *a);
            } else if (std::get_if<InputAny>(&u.rhs)) {
                out << "input";
            } else if (const InputAtLeast* in = std::get_if<InputAtLeast>(&u.rhs)) {
                out << "input(>= " << print_affine(p, in->lower) << ")";
            } else {
                const DivByConst& d = std::get<DivByConst>(u.rhs);
                out << p.vars[d.var] << " div " << d.divisor;
            }
            out << "\n";
        }
    }
    return out.str();
}

MeasureBasis parse_measures(const Program& p, const std::string& text) {
    MeasureBasis basis;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        if (piece.find_first_not_of(" \t") == std::string::npos)
            throw Error("empty measure expression in \"" + text + "\"");
        Affine f = parse_affine(p, piece);
        basis.names.push_back(print_affine(p, f));
        basis.funcs.push_back(std::move(f));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (basis.funcs.empty()) throw Error("empty measure list");
    return basis;
}

MeasureBasis default_basis(const Program& p) {
    MeasureBasis basis;
    for (size_t v = 0; v < p.vars.size(); ++v) {
        Affine f;
        f.coeffs.assign(p.vars.size(), 0);
        f.coeffs[v] = 1;
        basis.funcs.push_back(std::move(f));
        basis.names.push_back(p.vars[v]);
    }
    return basis;
}

void validate_basis(const Program& p, const MeasureBasis& basis) {
    if (basis.funcs.empty()) throw Error("measure basis is empty");
    for (size_t i = 0; i < basis.funcs.size(); ++i) {
        const Affine& f = basis.funcs[i];
        const std::string& name = basis.names.size() > i ? basis.names[i] : print_affine(p, f);
        if (f.constant != 0)
            throw Error("measure " + name + " has a nonzero constant term");
        bool any = false;
        for (size_t v = 0; v < f.coeffs.size(); ++v) {
            long long c = f.coeffs[v];
            if (c == 0) continue;
            any = true;
            if (c < 0) throw Error("measure " + name + " has a negative coefficient");
            auto lower = p.guard_lower(static_cast<int>(v));
            if (!lower || *lower < 1)
                throw Error("measure " + name + " weights variable " + p.vars[v] +
                            ", which the guard does not force positive");
        }
        if (!any) throw Error("measure " + name + " has no variables");
    }
}

}  // namespace termlab
