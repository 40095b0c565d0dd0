#include "termlab/ranking.hpp"

#include <algorithm>

namespace termlab {

const char* component_change_name(ComponentChange c) {
    switch (c) {
        case ComponentChange::Unchanged: return "unchanged";
        case ComponentChange::Decreasing: return "decreasing";
        default: return "unknown";
    }
}

RankingSpec parse_ranking(const Program& p, const std::string& text) {
    RankingSpec r;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        std::string piece =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        if (piece.find_first_not_of(" \t") == std::string::npos)
            throw Error("empty rank component in \"" + text + "\"");
        Affine f = parse_affine(p, piece);
        r.names.push_back(print_affine(p, f));
        r.components.push_back(std::move(f));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (r.components.empty()) throw Error("empty ranking specification");
    return r;
}

namespace {

// Classifies how one component changes across one case, over all guarded
// pre-states and all admissible inputs.
ComponentChange classify(const Program& p, const Case& c, const Affine& f) {
    size_t nvars = p.vars.size();
    std::vector<const UpdateRhs*> update(nvars, nullptr);
    for (const Update& u : c.updates) update[u.var] = &u.rhs;

    // delta = f(post) - f(pre) as an affine form over the pre-state. Inputs
    // with negative weight are replaced by their lower bound, the worst case
    // for a decrease; any other input or div influence defeats classification.
    Affine delta;
    delta.coeffs.assign(nvars, 0);
    delta.constant = 0;
    bool input_substituted = false;
    for (size_t v = 0; v < nvars; ++v) {
        long long w = f.coeffs[v];
        if (w == 0) continue;
        if (!update[v]) {
            continue;  // unchanged variable: post and pre contributions cancel
        }
        if (const Affine* a = std::get_if<Affine>(update[v])) {
            for (size_t u = 0; u < nvars; ++u)
                delta.coeffs[u] = checked_add(delta.coeffs[u], checked_mul(w, a->coeffs[u]));
            delta.constant = checked_add(delta.constant, checked_mul(w, a->constant));
            delta.coeffs[v] = checked_add(delta.coeffs[v], -w);
            continue;
        }
        if (const InputAtLeast* in = std::get_if<InputAtLeast>(update[v])) {
            if (w > 0) return ComponentChange::Unknown;
            input_substituted = true;
            for (size_t u = 0; u < nvars; ++u)
                delta.coeffs[u] = checked_add(delta.coeffs[u], checked_mul(w, in->lower.coeffs[u]));
            delta.constant = checked_add(delta.constant, checked_mul(w, in->lower.constant));
            delta.coeffs[v] = checked_add(delta.coeffs[v], -w);
            continue;
        }
        return ComponentChange::Unknown;  // unrestricted input or div feeds f
    }

    if (!input_substituted && delta.is_zero()) return ComponentChange::Unchanged;
    auto sup = guard_sup(p, delta);
    if (sup && *sup <= -1) return ComponentChange::Decreasing;
    return ComponentChange::Unknown;
}

}  // namespace

RankingResult verify_ranking(const Program& p, const RankingSpec& r) {
    if (r.components.empty()) throw Error("empty ranking specification");
    for (const Affine& f : r.components)
        if (f.coeffs.size() != p.vars.size())
            throw Error("rank component does not match the program's variables");

    RankingResult result;
    result.verdict = Verdict::Terminates;
    for (const Case& c : p.cases) {
        CaseJustification just;
        just.case_id = c.id;
        for (const Affine& f : r.components) just.changes.push_back(classify(p, c, f));
        for (size_t i = 0; i < r.components.size(); ++i) {
            if (just.changes[i] == ComponentChange::Unchanged) continue;
            if (just.changes[i] == ComponentChange::Decreasing) {
                auto inf = guard_inf(p, r.components[i]);
                if (inf && *inf >= 0) just.lead = static_cast<int>(i);
            }
            break;  // the first non-unchanged component settles the case
        }
        if (!just.lead) {
            result.verdict = Verdict::Unknown;
            if (!result.failing_case) result.failing_case = c.id;
        }
        result.cases.push_back(std::move(just));
    }
    return result;
}

LexCheck check_lex_decrease(const Program& p, const RankingSpec& r, const Box& box, int max_len,
                            long long input_cap) {
    if (r.components.empty()) throw Error("empty ranking specification");
    auto tuple_of = [&](const StateVector& s, std::vector<long long>& out) {
        out.assign(r.components.size(), 0);
        if (!guard_holds(p, s)) return;  // bottom element
        for (size_t i = 0; i < r.components.size(); ++i) out[i] = r.components[i].eval(s);
    };
    auto make_ok = [&](const StateVector& start) -> PrefixPredicate {
        std::vector<long long> at_start;
        tuple_of(start, at_start);
        return [&, at_start = std::move(at_start)](const StateVector& cur) {
            std::vector<long long> now;
            tuple_of(cur, now);
            return std::lexicographical_compare(now.begin(), now.end(), at_start.begin(),
                                                at_start.end());
        };
    };
    LexCheck check;
    check.counterexample = find_segment_violation(p, box, max_len, input_cap, make_ok);
    check.pass = !check.counterexample.has_value();
    return check;
}

}  // namespace termlab
