#include "termlab/transinv.hpp"

#include <cctype>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace termlab {

bool RelAtom::holds(const StateVector& pre, const StateVector& post) const {
    size_t n = pre.size();
    long long acc = 0;
    for (size_t v = 0; v < n; ++v) acc = checked_add(acc, checked_mul(coeffs[v], pre[v]));
    for (size_t v = 0; v < n; ++v) acc = checked_add(acc, checked_mul(coeffs[n + v], post[v]));
    return strict ? acc < bound : acc <= bound;
}

bool Disjunct::covers(const StateVector& pre, const StateVector& post) const {
    for (const RelAtom& a : atoms)
        if (!a.holds(pre, post)) return false;
    return true;
}

namespace {

struct Tok {
    enum Kind { Ident, Int, Plus, Minus, Star, Lt, Le, Gt, Ge, Colon, End } kind;
    std::string text;    // Ident
    long long value = 0; // Int
    bool primed = false; // Ident followed by '
    int column = 0;
};

std::vector<Tok> lex_line(const std::string& line, int lineno) {
    std::vector<Tok> out;
    size_t i = 0;
    while (i < line.size()) {
        char ch = line[i];
        int col = static_cast<int>(i) + 1;
        if (ch == ' ' || ch == '\t') {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_'))
                ++j;
            Tok t{Tok::Ident, line.substr(i, j - i), 0, false, col};
            if (j < line.size() && line[j] == '\'') {
                t.primed = true;
                ++j;
            }
            out.push_back(std::move(t));
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            std::string digits = line.substr(i, j - i);
            try {
                out.push_back({Tok::Int, "", std::stoll(digits), false, col});
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range", lineno, col);
            }
            i = j;
            continue;
        }
        switch (ch) {
            case '+': out.push_back({Tok::Plus, "", 0, false, col}); ++i; break;
            case '-': out.push_back({Tok::Minus, "", 0, false, col}); ++i; break;
            case '*': out.push_back({Tok::Star, "", 0, false, col}); ++i; break;
            case ':': out.push_back({Tok::Colon, "", 0, false, col}); ++i; break;
            case '<':
                if (i + 1 < line.size() && line[i + 1] == '=') {
                    out.push_back({Tok::Le, "", 0, false, col});
                    i += 2;
                } else {
                    out.push_back({Tok::Lt, "", 0, false, col});
                    ++i;
                }
                break;
            case '>':
                if (i + 1 < line.size() && line[i + 1] == '=') {
                    out.push_back({Tok::Ge, "", 0, false, col});
                    i += 2;
                } else {
                    out.push_back({Tok::Gt, "", 0, false, col});
                    ++i;
                }
                break;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", lineno, col);
        }
    }
    out.push_back({Tok::End, "", 0, false, static_cast<int>(line.size()) + 1});
    return out;
}

// Linear form over the 2n pre/post slots.
struct Lin {
    std::vector<long long> coeffs;
    long long constant = 0;
};

struct LineParser {
    const Program& p;
    const std::vector<Tok>& toks;
    int lineno;
    size_t pos = 0;

    const Tok& peek() const { return toks[pos]; }
    const Tok& get() { return toks[pos++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, lineno, peek().column);
    }

    int var_slot(const Tok& t, bool allow_primed) {
        int idx = p.var_index(t.text);
        if (idx < 0) throw ParseError("unknown variable '" + t.text + "'", lineno, t.column);
        if (t.primed && !allow_primed)
            throw ParseError("post-state variable '" + t.text + "'' is not allowed in a rank",
                             lineno, t.column);
        return t.primed ? static_cast<int>(p.vars.size()) + idx : idx;
    }

    // term := INT | INT '*' var | var, summed into lin with the given sign.
    void parse_term(Lin& lin, long long sign, bool allow_primed) {
        if (peek().kind == Tok::Int) {
            long long k = checked_mul(sign, get().value);
            if (peek().kind == Tok::Star) {
                get();
                if (peek().kind != Tok::Ident) fail("expected a variable after '*'");
                int s = var_slot(get(), allow_primed);
                lin.coeffs[s] = checked_add(lin.coeffs[s], k);
            } else {
                lin.constant = checked_add(lin.constant, k);
            }
            return;
        }
        if (peek().kind == Tok::Ident) {
            int s = var_slot(get(), allow_primed);
            lin.coeffs[s] = checked_add(lin.coeffs[s], sign);
            return;
        }
        fail("expected a term");
    }

    Lin parse_linear(bool allow_primed) {
        Lin lin;
        lin.coeffs.assign(2 * p.vars.size(), 0);
        long long sign = 1;
        if (peek().kind == Tok::Minus) {
            get();
            sign = -1;
        }
        parse_term(lin, sign, allow_primed);
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            sign = get().kind == Tok::Plus ? 1 : -1;
            parse_term(lin, sign, allow_primed);
        }
        return lin;
    }

    RelAtom parse_atom() {
        Lin lhs = parse_linear(true);
        Tok::Kind op = peek().kind;
        if (op != Tok::Lt && op != Tok::Le && op != Tok::Gt && op != Tok::Ge)
            fail("expected a comparison");
        get();
        Lin rhs = parse_linear(true);
        if (peek().kind != Tok::End) fail("unexpected trailing tokens");
        if (op == Tok::Gt || op == Tok::Ge) std::swap(lhs, rhs);  // a > b means b < a
        RelAtom atom;
        atom.coeffs.resize(lhs.coeffs.size());
        for (size_t i = 0; i < lhs.coeffs.size(); ++i)
            atom.coeffs[i] = checked_add(lhs.coeffs[i], -rhs.coeffs[i]);
        atom.bound = checked_add(rhs.constant, -lhs.constant);
        atom.strict = op == Tok::Lt || op == Tok::Gt;
        return atom;
    }
};

}  // namespace

InvariantCandidate parse_invariant(const Program& p, const std::string& text) {
    InvariantCandidate cand;
    bool have_rank = false;
    int open_line = 0;

    auto close_block = [&](int lineno) {
        if (cand.disjuncts.empty()) return;
        if (!have_rank)
            throw ParseError("disjunct opened at line " + std::to_string(open_line) +
                                 " has no rank",
                             lineno, 1);
    };

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (size_t hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();

        std::vector<Tok> toks = lex_line(raw, lineno);
        LineParser lp{p, toks, lineno};

        if (toks[0].kind == Tok::Ident && toks[0].text == "disjunct" && !toks[0].primed &&
            toks[1].kind == Tok::Colon) {
            if (toks[2].kind != Tok::End)
                throw ParseError("unexpected tokens after 'disjunct:'", lineno, toks[2].column);
            close_block(lineno);
            cand.disjuncts.emplace_back();
            have_rank = false;
            open_line = lineno;
            continue;
        }
        if (toks[0].kind == Tok::Ident && toks[0].text == "rank" && !toks[0].primed &&
            toks[1].kind == Tok::Colon) {
            if (cand.disjuncts.empty())
                throw ParseError("rank outside a disjunct", lineno, toks[0].column);
            if (have_rank)
                throw ParseError("disjunct already has a rank", lineno, toks[0].column);
            lp.pos = 2;
            Lin lin = lp.parse_linear(false);
            if (lp.peek().kind != Tok::End) lp.fail("unexpected trailing tokens");
            Affine rank;
            rank.coeffs.assign(lin.coeffs.begin(), lin.coeffs.begin() + p.vars.size());
            rank.constant = lin.constant;
            cand.disjuncts.back().rank = std::move(rank);
            have_rank = true;
            continue;
        }
        if (cand.disjuncts.empty())
            throw ParseError("expected 'disjunct:' before the first atom", lineno,
                             toks[0].column);
        cand.disjuncts.back().atoms.push_back(lp.parse_atom());
    }
    if (cand.disjuncts.empty()) throw ParseError("no disjuncts", lineno == 0 ? 1 : lineno, 1);
    close_block(lineno == 0 ? 1 : lineno);
    return cand;
}

InvariantCandidate read_invariant_file(const Program& p, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_invariant(p, buf.str());
}

namespace {

size_t candidate_vars(const InvariantCandidate& c) {
    if (c.disjuncts.empty()) throw Error("invariant candidate has no disjuncts");
    return c.disjuncts.front().rank.coeffs.size();
}

// Difference-bound entailment for one disjunct. Nodes: 0 is the zero anchor,
// 1+s the pre/post slot s. An edge (u, v, w) encodes x_v - x_u <= w, so the
// shortest u-to-v distance is the tightest implied bound on x_v - x_u.
struct DiffGraph {
    int nodes;
    std::vector<std::tuple<int, int, long long>> edges;

    explicit DiffGraph(size_t slots) : nodes(static_cast<int>(slots) + 1) {}

    bool infeasible() const {
        std::vector<long long> dist(nodes, 0);
        for (int round = 0; round < nodes; ++round) {
            bool relaxed = false;
            for (auto [u, v, w] : edges)
                if (dist[u] + w < dist[v]) {
                    dist[v] = dist[u] + w;
                    relaxed = true;
                }
            if (!relaxed) return false;
        }
        return true;
    }

    // Tightest implied bound on x_v - x_u, or nullopt when unconstrained.
    std::optional<long long> bound(int u, int v) const {
        constexpr long long far = std::numeric_limits<long long>::max();
        std::vector<long long> dist(nodes, far);
        dist[u] = 0;
        for (int round = 0; round + 1 < nodes; ++round) {
            bool relaxed = false;
            for (auto [a, b, w] : edges)
                if (dist[a] != far && dist[a] + w < dist[b]) {
                    dist[b] = dist[a] + w;
                    relaxed = true;
                }
            if (!relaxed) break;
        }
        if (dist[v] == far) return std::nullopt;
        return dist[v];
    }
};

// Builds the difference graph of a disjunct, or nullopt when some atom is not
// a difference bound (unit coefficients on at most two slots, one of each sign).
std::optional<DiffGraph> difference_graph(const Disjunct& d, size_t slots) {
    DiffGraph g(slots);
    for (const RelAtom& a : d.atoms) {
        long long b = a.strict ? a.bound - 1 : a.bound;  // integer-valued slots
        int pos = -1, neg = -1;
        for (size_t s = 0; s < a.coeffs.size(); ++s) {
            if (a.coeffs[s] == 0) continue;
            if (a.coeffs[s] == 1 && pos < 0)
                pos = static_cast<int>(s);
            else if (a.coeffs[s] == -1 && neg < 0)
                neg = static_cast<int>(s);
            else
                return std::nullopt;
        }
        if (pos < 0 && neg < 0) {
            if (b < 0) g.edges.emplace_back(0, 0, -1);  // 0 <= b fails: poison cycle
            continue;
        }
        // x_pos - x_neg <= b, with node 0 standing in for a missing side.
        g.edges.emplace_back(neg + 1, pos + 1, b);
    }
    return g;
}

const Affine* unit_rank_var(const Disjunct& d, size_t* var) {
    size_t hits = 0, at = 0;
    for (size_t v = 0; v < d.rank.coeffs.size(); ++v)
        if (d.rank.coeffs[v] != 0) {
            ++hits;
            at = v;
        }
    if (hits != 1 || d.rank.coeffs[at] != 1 || d.rank.constant != 0) return nullptr;
    *var = at;
    return &d.rank;
}

}  // namespace

DwfResult check_dwf(const InvariantCandidate& c, const Box& box) {
    size_t n = candidate_vars(c);
    if (box.dims.size() != n)
        throw Error("box has " + std::to_string(box.dims.size()) +
                    " dimensions, invariant has " + std::to_string(n) + " variables");

    DwfResult res;
    res.pass = true;
    for (size_t d = 0; d < c.disjuncts.size() && res.pass; ++d) {
        const Disjunct& dis = c.disjuncts[d];
        box.for_each([&](const StateVector& pre) {
            return box.for_each([&](const StateVector& post) {
                if (!dis.covers(pre, post)) return true;
                long long rpre = dis.rank.eval(pre);
                if (rpre >= 0 && dis.rank.eval(post) <= rpre - 1) return true;
                res.pass = false;
                res.violation = DwfViolation{static_cast<int>(d), pre, post, rpre < 0};
                return false;
            });
        });
    }
    if (!res.pass) return res;

    // Entailment upgrade: every goal provable from difference bounds alone.
    res.exact = true;
    for (const Disjunct& dis : c.disjuncts) {
        size_t rank_var = 0;
        const Affine* rank = unit_rank_var(dis, &rank_var);
        std::optional<DiffGraph> g = rank ? difference_graph(dis, 2 * n) : std::nullopt;
        if (!g) {
            res.exact = false;
            break;
        }
        if (g->infeasible()) continue;  // atoms are contradictory: vacuously well founded
        int pre_node = static_cast<int>(rank_var) + 1;
        int post_node = static_cast<int>(n + rank_var) + 1;
        auto nonneg = g->bound(pre_node, 0);     // -pre <= 0
        auto decrease = g->bound(pre_node, post_node);  // post - pre <= -1
        if (!nonneg || *nonneg > 0 || !decrease || *decrease > -1) {
            res.exact = false;
            break;
        }
    }
    return res;
}

namespace {

// Enumerates the successors of s in deterministic order: cases ascending,
// input vectors in ascending lexicographic order, input(>= e) ranging over
// [e, e+cap] and unrestricted input over [-cap, cap].
bool each_successor(const Program& p, const StateVector& s, long long cap,
                    const std::function<bool(const StateVector&)>& f) {
    StateVector out;
    for (const Case& c : p.cases) {
        std::vector<std::pair<long long, long long>> range;  // inclusive per slot
        for (const Update& u : c.updates) {
            if (std::holds_alternative<InputAny>(u.rhs))
                range.emplace_back(-cap, cap);
            else if (const InputAtLeast* in = std::get_if<InputAtLeast>(&u.rhs)) {
                long long lo = in->lower.eval(s);
                range.emplace_back(lo, lo + cap);
            }
        }
        std::vector<long long> vals(range.size());
        for (size_t i = 0; i < range.size(); ++i) vals[i] = range[i].first;
        for (;;) {
            apply_case(p, s, c.id, vals, out);
            if (!f(out)) return false;
            size_t i = range.size();
            bool rolled = true;
            while (i > 0) {
                --i;
                if (vals[i] < range[i].second) {
                    ++vals[i];
                    for (size_t j = i + 1; j < vals.size(); ++j) vals[j] = range[j].first;
                    rolled = false;
                    break;
                }
            }
            if (range.empty() || rolled) break;
        }
    }
    return true;
}

std::optional<size_t> covering_disjunct(const InvariantCandidate& c, const StateVector& pre,
                                        const StateVector& post) {
    for (size_t d = 0; d < c.disjuncts.size(); ++d)
        if (c.disjuncts[d].covers(pre, post)) return d;
    return std::nullopt;
}

}  // namespace

TransInvResult check_transition_invariant(const Program& p, const InvariantCandidate& c,
                                          const Box& box, long long input_cap,
                                          long long pair_budget) {
    size_t n = candidate_vars(c);
    if (n != p.vars.size())
        throw Error("invariant is over " + std::to_string(n) + " variables, program has " +
                    std::to_string(p.vars.size()));
    if (box.dims.size() != n)
        throw Error("box has " + std::to_string(box.dims.size()) +
                    " dimensions, program has " + std::to_string(n) + " variables");
    if (input_cap < 0) throw Error("input_cap must be nonnegative");
    if (pair_budget < 1) throw Error("pair_budget must be positive");

    TransInvResult res;
    std::set<std::pair<StateVector, StateVector>> seen;
    std::deque<std::pair<StateVector, StateVector>> queue;

    // Admits one reachable pair: records it, reports it when uncovered, and
    // queues it for extension otherwise. Returns false to stop the search.
    auto admit = [&](const StateVector& s1, const StateVector& sn) {
        auto pair = std::make_pair(s1, sn);
        if (!seen.insert(pair).second) return true;
        if (static_cast<long long>(seen.size()) > pair_budget)
            throw Error("more than " + std::to_string(pair_budget) +
                        " reachable state pairs; raise the pair budget or shrink the box");
        if (!covering_disjunct(c, s1, sn)) {
            res.counterexample = PairCounterexample{s1, sn};
            return false;
        }
        queue.push_back(std::move(pair));
        return true;
    };

    bool complete = box.for_each([&](const StateVector& s) {
        if (!guard_holds(p, s)) return true;
        return each_successor(p, s, input_cap, [&](const StateVector& t) { return admit(s, t); });
    });
    while (complete && !queue.empty()) {
        std::pair<StateVector, StateVector> front = std::move(queue.front());
        queue.pop_front();
        const StateVector& s1 = front.first;
        const StateVector& sn = front.second;
        if (!guard_holds(p, sn)) continue;
        complete = each_successor(p, sn, input_cap,
                                  [&](const StateVector& t) { return admit(s1, t); });
    }

    res.pairs = static_cast<long long>(seen.size());
    res.pass = !res.counterexample.has_value();
    return res;
}

EdgeColoring segment_coloring(const Program& p, const InvariantCandidate& c, const Trace& trace) {
    size_t n = candidate_vars(c);
    if (n != p.vars.size())
        throw Error("invariant is over " + std::to_string(n) + " variables, program has " +
                    std::to_string(p.vars.size()));
    if (trace.states.empty()) throw Error("trace has no states");

    int len = static_cast<int>(trace.states.size());
    EdgeColoring g(len, static_cast<int>(c.disjuncts.size()));
    for (int i = 1; i < len; ++i)
        for (int j = i + 1; j <= len; ++j) {
            auto d = covering_disjunct(c, trace.states[i - 1], trace.states[j - 1]);
            if (!d)
                throw Error("segment pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") is not covered by any disjunct");
            g.at(i, j) = static_cast<int>(*d) + 1;
        }
    return g;
}

}  // namespace termlab
