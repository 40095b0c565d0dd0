#include "termlab/interp.hpp"

#include <atomic>
#include <mutex>
#include <random>
#include <thread>

namespace termlab {

namespace {

long long random_in(std::mt19937_64& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

// Input-taking updates of one case, in update order.
struct InputSlot {
    bool unrestricted = false;
    const Affine* lower = nullptr;  // set when not unrestricted
};

std::vector<std::vector<InputSlot>> input_slots(const Program& p) {
    std::vector<std::vector<InputSlot>> slots(p.cases.size());
    for (size_t c = 0; c < p.cases.size(); ++c) {
        for (const Update& u : p.cases[c].updates) {
            if (std::holds_alternative<InputAny>(u.rhs))
                slots[c].push_back({true, nullptr});
            else if (const InputAtLeast* in = std::get_if<InputAtLeast>(&u.rhs))
                slots[c].push_back({false, &in->lower});
        }
    }
    return slots;
}

}  // namespace

Trace run(const Program& p, const StateVector& start, const Strategy& strat, int max_steps) {
    if (max_steps < 0) throw Error("max_steps must be nonnegative");
    if (start.size() != p.vars.size())
        throw Error("start state has " + std::to_string(start.size()) + " values, program has " +
                    std::to_string(p.vars.size()) + " variables");

    const Scripted* script = std::get_if<Scripted>(&strat);
    std::mt19937_64 rng;
    long long cap = 3;
    if (const SeededRandom* sr = std::get_if<SeededRandom>(&strat)) {
        if (sr->input_cap < 0) throw Error("input_cap must be nonnegative");
        rng.seed(sr->seed);
        cap = sr->input_cap;
    }

    Trace t;
    t.states.push_back(start);
    while (static_cast<int>(t.choices.size()) < max_steps && guard_holds(p, t.states.back())) {
        size_t step = t.choices.size();
        Choice ch;
        if (script) {
            if (step >= script->steps.size())
                throw Error("script exhausted at step " + std::to_string(step + 1));
            ch = script->steps[step];
        } else {
            ch.first = 1 + static_cast<int>(rng() % p.cases.size());
            for (const Update& u : p.cases[ch.first - 1].updates) {
                if (std::holds_alternative<InputAny>(u.rhs)) {
                    ch.second.push_back(random_in(rng, -cap, cap));
                } else if (const InputAtLeast* in = std::get_if<InputAtLeast>(&u.rhs)) {
                    long long lower = in->lower.eval(t.states.back());
                    ch.second.push_back(random_in(rng, lower, lower + cap));
                }
            }
        }
        StateVector next;
        try {
            apply_case(p, t.states.back(), ch.first, ch.second, next);
        } catch (const Error& e) {
            throw Error("step " + std::to_string(step + 1) + ": " + e.what());
        }
        t.states.push_back(std::move(next));
        t.choices.push_back(std::move(ch));
    }
    t.terminated = !guard_holds(p, t.states.back());
    return t;
}

Box Box::uniform(size_t n, long long lo, long long hi) {
    Box b;
    b.dims.assign(n, {lo, hi});
    return b;
}

bool Box::contains(const StateVector& s) const {
    if (s.size() != dims.size()) return false;
    for (size_t i = 0; i < dims.size(); ++i)
        if (s[i] < dims[i].first || s[i] > dims[i].second) return false;
    return true;
}

bool Box::for_each(const std::function<bool(const StateVector&)>& f) const {
    for (const auto& d : dims)
        if (d.first > d.second) return true;
    StateVector s(dims.size());
    for (size_t i = 0; i < dims.size(); ++i) s[i] = dims[i].first;
    for (;;) {
        if (!f(s)) return false;
        size_t i = dims.size();
        while (i > 0) {
            --i;
            if (s[i] < dims[i].second) {
                ++s[i];
                for (size_t j = i + 1; j < dims.size(); ++j) s[j] = dims[j].first;
                break;
            }
            if (i == 0) return true;
        }
    }
}

namespace {

// Depth-first walk over the segment tree from one start state. Buffers are
// preallocated so the hot path does not allocate.
struct SegmentWalker {
    const Program& p;
    int max_len;
    long long cap;
    const std::vector<std::vector<InputSlot>>& slots;
    std::vector<StateVector> path;
    std::vector<Choice> choices;

    SegmentWalker(const Program& p, int max_len, long long cap,
                  const std::vector<std::vector<InputSlot>>& slots)
        : p(p), max_len(max_len), cap(cap), slots(slots) {
        path.assign(std::max(max_len, 1), StateVector(p.vars.size()));
        choices.assign(std::max(max_len, 1), Choice{});
    }

    Trace snapshot(int last, bool terminated) const {
        Trace t;
        t.states.assign(path.begin(), path.begin() + last + 1);
        t.choices.assign(choices.begin(), choices.begin() + last);
        t.terminated = terminated;
        return t;
    }

    // Calls body(case_id, inputs) for every admissible choice at path[d], in
    // case order then ascending input order; body returning false stops the
    // enumeration. Returns false when stopped.
    bool each_choice(int d, const std::function<bool(int, const std::vector<long long>&)>& body) {
        const StateVector& s = path[d];
        for (size_t c = 0; c < p.cases.size(); ++c) {
            const std::vector<InputSlot>& cs = slots[c];
            std::vector<long long>& vals = choices[d].second;
            std::vector<long long> lows(cs.size());
            vals.assign(cs.size(), 0);
            for (size_t i = 0; i < cs.size(); ++i) {
                lows[i] = cs[i].unrestricted ? -cap : cs[i].lower->eval(s);
                vals[i] = lows[i];
            }
            for (;;) {
                if (!body(static_cast<int>(c) + 1, vals)) return false;
                size_t i = cs.size();
                bool rolled = true;
                while (i > 0) {
                    --i;
                    long long hi = cs[i].unrestricted ? cap : lows[i] + cap;
                    if (vals[i] < hi) {
                        ++vals[i];
                        for (size_t j = i + 1; j < cs.size(); ++j) vals[j] = lows[j];
                        rolled = false;
                        break;
                    }
                }
                if (cs.empty() || rolled) break;
            }
        }
        return true;
    }
};

}  // namespace

void for_each_segment(const Program& p, const Box& box, int max_len, long long input_cap,
                      const std::function<void(const Trace&)>& f) {
    if (box.dims.size() != p.vars.size())
        throw Error("box has " + std::to_string(box.dims.size()) + " dimensions, program has " +
                    std::to_string(p.vars.size()) + " variables");
    if (input_cap < 0) throw Error("input_cap must be nonnegative");
    auto slots = input_slots(p);
    SegmentWalker w(p, max_len, input_cap, slots);

    std::function<void(int)> dfs = [&](int d) {
        bool guarded = guard_holds(p, w.path[d]);
        if (!guarded || d + 1 == max_len) {
            if (d >= 1) f(w.snapshot(d, !guarded));
            return;
        }
        // vals aliases choices[d].second, so snapshots see the live inputs.
        w.each_choice(d, [&](int case_id, const std::vector<long long>& vals) {
            apply_case(p, w.path[d], case_id, vals, w.path[d + 1]);
            w.choices[d].first = case_id;
            dfs(d + 1);
            return true;
        });
    };

    box.for_each([&](const StateVector& s) {
        if (max_len >= 2 && guard_holds(p, s)) {
            w.path[0] = s;
            dfs(0);
        }
        return true;
    });
}

std::vector<Trace> enumerate_segments(const Program& p, const Box& box, int max_len,
                                      long long input_cap) {
    std::vector<Trace> out;
    for_each_segment(p, box, max_len, input_cap, [&](const Trace& t) { out.push_back(t); });
    return out;
}

std::optional<Trace> find_segment_violation(
    const Program& p, const Box& box, int max_len, long long input_cap,
    const std::function<PrefixPredicate(const StateVector&)>& make_ok) {
    if (box.dims.size() != p.vars.size())
        throw Error("box has " + std::to_string(box.dims.size()) + " dimensions, program has " +
                    std::to_string(p.vars.size()) + " variables");
    if (input_cap < 0) throw Error("input_cap must be nonnegative");

    std::vector<StateVector> starts;
    box.for_each([&](const StateVector& s) {
        if (guard_holds(p, s)) starts.push_back(s);
        return true;
    });
    if (starts.empty() || max_len < 2) return std::nullopt;

    auto slots = input_slots(p);
    unsigned nthreads = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
    nthreads = std::min<unsigned>(nthreads, starts.size());

    std::atomic<size_t> next{0};
    std::atomic<size_t> best{SIZE_MAX};
    std::vector<std::optional<Trace>> found(nthreads);
    std::vector<size_t> found_at(nthreads, SIZE_MAX);

    auto worker = [&](unsigned tid) {
        SegmentWalker w(p, max_len, input_cap, slots);
        // Walks the tree below path[d]; returns true when a violation was
        // recorded (the first one in depth-first order).
        std::function<bool(int, const PrefixPredicate&, Trace&)> dfs =
            [&](int d, const PrefixPredicate& ok, Trace& out) {
                if (d + 1 >= max_len) return false;
                if (!guard_holds(p, w.path[d])) return false;
                bool hit = false;
                // vals aliases choices[d].second, so snapshots see the live inputs.
                w.each_choice(d, [&](int case_id, const std::vector<long long>&) {
                    apply_case(p, w.path[d], case_id, w.choices[d].second, w.path[d + 1]);
                    w.choices[d].first = case_id;
                    if (!ok(w.path[d + 1])) {
                        out = w.snapshot(d + 1, !guard_holds(p, w.path[d + 1]));
                        hit = true;
                        return false;
                    }
                    hit = dfs(d + 1, ok, out);
                    return !hit;
                });
                return hit;
            };
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= starts.size()) break;
            if (i > best.load(std::memory_order_relaxed)) break;
            w.path[0] = starts[i];
            PrefixPredicate ok = make_ok(starts[i]);
            Trace out;
            if (dfs(0, ok, out)) {
                size_t prev = best.load();
                while (i < prev && !best.compare_exchange_weak(prev, i)) {
                }
                if (i < found_at[tid]) {
                    found_at[tid] = i;
                    found[tid] = std::move(out);
                }
            }
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (std::thread& t : pool) t.join();
    }

    size_t least = SIZE_MAX;
    std::optional<Trace> result;
    for (unsigned t = 0; t < nthreads; ++t) {
        if (found_at[t] < least) {
            least = found_at[t];
            result = found[t];
        }
    }
    return result;
}

CheckReport check_segment_decrease(const Program& p, const MeasureBasis& basis, const Box& box,
                                   int max_len, long long input_cap) {
    validate_basis(p, basis);
    auto make_ok = [&](const StateVector& start) -> PrefixPredicate {
        std::vector<long long> at_start(basis.funcs.size());
        for (size_t i = 0; i < basis.funcs.size(); ++i) at_start[i] = basis.funcs[i].eval(start);
        return [&basis, at_start = std::move(at_start)](const StateVector& cur) {
            for (size_t i = 0; i < basis.funcs.size(); ++i)
                if (basis.funcs[i].eval(cur) < at_start[i]) return true;
            return false;
        };
    };
    CheckReport report;
    report.counterexample = find_segment_violation(p, box, max_len, input_cap, make_ok);
    report.pass = !report.counterexample.has_value();
    return report;
}

}  // namespace termlab
