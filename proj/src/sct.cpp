#include "termlab/sct.hpp"

#include <deque>
#include <set>

namespace termlab {

namespace {

// Whether f is exactly one variable with coefficient 1.
std::optional<int> unit_var(const Affine& f) {
    std::optional<int> found;
    if (f.constant != 0) return std::nullopt;
    for (size_t v = 0; v < f.coeffs.size(); ++v) {
        if (f.coeffs[v] == 0) continue;
        if (f.coeffs[v] != 1 || found) return std::nullopt;
        found = static_cast<int>(v);
    }
    return found;
}

}  // namespace

TropicalMatrix extract_matrix(const Program& p, int case_id, const MeasureBasis& basis) {
    validate_basis(p, basis);
    if (case_id < 1 || case_id > static_cast<int>(p.cases.size()))
        throw Error("unknown case " + std::to_string(case_id));
    const Case& c = p.cases[case_id - 1];

    size_t nvars = p.vars.size();
    std::vector<const UpdateRhs*> update(nvars, nullptr);
    for (const Update& u : c.updates) update[u.var] = &u.rhs;

    int m = static_cast<int>(basis.funcs.size());
    TropicalMatrix out(m);
    for (int j = 0; j < m; ++j) {
        const Affine& fj = basis.funcs[j];

        bool input_fed = false;
        std::optional<int> div_var;
        long long div_weight = 0;
        for (size_t v = 0; v < nvars; ++v) {
            if (fj.coeffs[v] == 0 || !update[v]) continue;
            if (std::holds_alternative<InputAny>(*update[v]) ||
                std::holds_alternative<InputAtLeast>(*update[v])) {
                input_fed = true;
            } else if (std::holds_alternative<DivByConst>(*update[v])) {
                div_var = static_cast<int>(v);
                div_weight = fj.coeffs[v];
            }
        }
        if (input_fed) continue;  // whole column stays infinite

        if (div_var) {
            // Only the self-entry of a unit measure on the divided variable is
            // supported: floor(x/d) <= x - 1 once the guard forces x >= 1.
            const DivByConst& d = std::get<DivByConst>(*update[*div_var]);
            auto fj_unit = unit_var(fj);
            bool self = fj_unit && *fj_unit == d.var && div_weight == 1;
            for (int i = 0; i < m; ++i) {
                if (!self || !(basis.funcs[i] == fj)) continue;
                auto lower = p.guard_lower(d.var);
                if (lower && *lower >= 1) out.at(i, j) = -1;
            }
            continue;
        }

        // f_j(post) as an affine form over the pre-state.
        Affine post;
        post.coeffs.assign(nvars, 0);
        for (size_t v = 0; v < nvars; ++v) {
            long long w = fj.coeffs[v];
            if (w == 0) continue;
            if (const Affine* a = update[v] ? std::get_if<Affine>(update[v]) : nullptr) {
                for (size_t u = 0; u < nvars; ++u)
                    post.coeffs[u] = checked_add(post.coeffs[u], checked_mul(w, a->coeffs[u]));
                post.constant = checked_add(post.constant, checked_mul(w, a->constant));
            } else {
                post.coeffs[v] = checked_add(post.coeffs[v], w);
            }
        }

        for (int i = 0; i < m; ++i) {
            Affine gap = post;
            for (size_t v = 0; v < nvars; ++v)
                gap.coeffs[v] = checked_add(gap.coeffs[v], -basis.funcs[i].coeffs[v]);
            if (auto sup = guard_sup(p, gap)) out.at(i, j) = *sup;
        }
    }
    return out;
}

std::optional<AuditViolation> audit_matrix(const Program& p, int case_id,
                                           const MeasureBasis& basis, const TropicalMatrix& m,
                                           const Box& box, long long input_cap) {
    validate_basis(p, basis);
    if (m.n != static_cast<int>(basis.funcs.size()))
        throw Error("matrix dimension " + std::to_string(m.n) + " does not match the " +
                    std::to_string(basis.funcs.size()) + "-function basis");
    if (case_id < 1 || case_id > static_cast<int>(p.cases.size()))
        throw Error("unknown case " + std::to_string(case_id));
    if (box.dims.size() != p.vars.size())
        throw Error("box has " + std::to_string(box.dims.size()) + " dimensions, program has " +
                    std::to_string(p.vars.size()) + " variables");

    const Case& c = p.cases[case_id - 1];
    std::vector<bool> unrestricted;
    std::vector<const Affine*> lower_of;
    for (const Update& u : c.updates) {
        if (std::holds_alternative<InputAny>(u.rhs)) {
            unrestricted.push_back(true);
            lower_of.push_back(nullptr);
        } else if (const InputAtLeast* in = std::get_if<InputAtLeast>(&u.rhs)) {
            unrestricted.push_back(false);
            lower_of.push_back(&in->lower);
        }
    }
    size_t arity = unrestricted.size();
    std::optional<AuditViolation> violation;

    box.for_each([&](const StateVector& s) {
        if (!guard_holds(p, s)) return true;
        std::vector<long long> pre(basis.funcs.size());
        for (size_t i = 0; i < basis.funcs.size(); ++i) pre[i] = basis.funcs[i].eval(s);

        std::vector<long long> lows(arity);
        for (size_t k = 0; k < arity; ++k)
            lows[k] = unrestricted[k] ? -input_cap : lower_of[k]->eval(s);
        std::vector<long long> vals = lows;
        StateVector post(p.vars.size());
        for (;;) {
            apply_case(p, s, case_id, vals, post);
            for (size_t i = 0; i < basis.funcs.size() && !violation; ++i) {
                for (size_t j = 0; j < basis.funcs.size() && !violation; ++j) {
                    long long entry = m.at(static_cast<int>(i), static_cast<int>(j));
                    if (entry == kInf) continue;
                    long long post_value = basis.funcs[j].eval(post);
                    if (post_value > checked_add(pre[i], entry)) {
                        violation = AuditViolation{s,
                                                   vals,
                                                   static_cast<int>(i),
                                                   static_cast<int>(j),
                                                   entry,
                                                   pre[i],
                                                   post_value};
                    }
                }
            }
            if (violation) return false;
            size_t slot = arity;
            bool rolled = true;
            while (slot > 0) {
                --slot;
                long long hi = unrestricted[slot] ? input_cap : lows[slot] + input_cap;
                if (vals[slot] < hi) {
                    ++vals[slot];
                    for (size_t k = slot + 1; k < arity; ++k) vals[k] = lows[k];
                    rolled = false;
                    break;
                }
            }
            if (arity == 0 || rolled) break;
        }
        return true;
    });
    return violation;
}

std::vector<TropicalMatrix> closure(const std::vector<TropicalMatrix>& generators, long long k) {
    if (generators.empty()) throw Error("closure requires at least one generator");
    int n = generators.front().n;
    for (const TropicalMatrix& g : generators)
        if (g.n != n) throw Error("closure generators must share a dimension");

    std::set<TropicalMatrix> elems;
    std::deque<TropicalMatrix> work;
    for (const TropicalMatrix& g : generators) {
        TropicalMatrix cg = clamp(g, k);
        if (elems.insert(cg).second) work.push_back(cg);
    }
    while (!work.empty()) {
        TropicalMatrix a = std::move(work.front());
        work.pop_front();
        // Snapshot: products with elements discovered later are enqueued when
        // those elements are processed.
        std::vector<TropicalMatrix> snapshot(elems.begin(), elems.end());
        for (const TropicalMatrix& b : snapshot) {
            for (TropicalMatrix prod : {clamp(mul(a, b), k), clamp(mul(b, a), k)}) {
                if (elems.insert(prod).second) work.push_back(prod);
            }
        }
    }
    return {elems.begin(), elems.end()};
}

SctResult decide(const Program& p, const MeasureBasis& basis, long long k, Criterion criterion) {
    validate_basis(p, basis);
    SctResult r;
    r.cert.basis = basis;
    r.cert.clamp = k;
    r.cert.criterion = criterion;

    std::vector<TropicalMatrix> raw;
    for (int c = 1; c <= static_cast<int>(p.cases.size()); ++c)
        raw.push_back(extract_matrix(p, c, basis));
    for (const TropicalMatrix& g : raw) {
        TropicalMatrix cg = clamp(g, k);
        if (!(cg == g)) r.cert.generators_clamped = true;
        r.cert.generators.push_back(std::move(cg));
    }

    r.cert.closure_elems = closure(raw, k);

    r.cert.column_condition_all = true;
    bool all_pass = true;
    for (size_t idx = 0; idx < r.cert.closure_elems.size(); ++idx) {
        const TropicalMatrix& elem = r.cert.closure_elems[idx];
        if (!column_condition(elem)) r.cert.column_condition_all = false;
        int witness = -1;
        if (criterion == Criterion::A) {
            for (int i = 0; i < elem.n && witness < 0; ++i)
                if (elem.at(i, i) < 0) witness = i;
        } else {
            if (auto power = power_diag_negative(elem, k)) witness = *power;
        }
        r.cert.witnesses.push_back(witness);
        if (witness < 0 && all_pass) {
            all_pass = false;
            r.cert.failing_element = static_cast<int>(idx);
        }
    }
    r.verdict = all_pass ? Verdict::Terminates : Verdict::Unknown;
    return r;
}

}  // namespace termlab
