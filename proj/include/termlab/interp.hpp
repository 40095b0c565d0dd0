#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "termlab/measure.hpp"
#include "termlab/prog.hpp"

namespace termlab {

// One decided step: the case taken plus the values fed to its input updates.
using Choice = std::pair<int, std::vector<long long>>;

struct Scripted {
    std::vector<Choice> steps;
};

// Draws cases uniformly; input(>= e) values uniformly in [e, e+input_cap] and
// unrestricted inputs uniformly in [-input_cap, input_cap]. Equal seeds give
// equal decision sequences.
struct SeededRandom {
    std::uint64_t seed = 0;
    long long input_cap = 3;
};

using Strategy = std::variant<Scripted, SeededRandom>;

struct Trace {
    std::vector<StateVector> states;
    std::vector<Choice> choices;
    bool terminated = false;
};

Trace run(const Program& p, const StateVector& start, const Strategy& strat, int max_steps);

struct Box {
    std::vector<std::pair<long long, long long>> dims;  // inclusive bounds

    static Box uniform(size_t n, long long lo, long long hi);
    bool contains(const StateVector& s) const;
    // Visits every point in lexicographic order; f returning false stops the
    // walk. Returns false when stopped early.
    bool for_each(const std::function<bool(const StateVector&)>& f) const;
};

// Streams every maximal computational segment whose start lies in box: a
// guarded start state extended until the guard fails or the segment holds
// max_len states. Values for input(>= e) range over [e, e+input_cap], values
// for unrestricted input over [-input_cap, input_cap]. Every shorter segment
// is a prefix of a yielded one or starts at a later state.
void for_each_segment(const Program& p, const Box& box, int max_len, long long input_cap,
                      const std::function<void(const Trace&)>& f);

std::vector<Trace> enumerate_segments(const Program& p, const Box& box, int max_len,
                                      long long input_cap);

// Searches every segment prefix (start, current) from the box for one where
// ok(start)(current) is false, in parallel over start states; the violation
// with the lexicographically least start (then depth-first order) wins.
// make_ok is invoked once per start state.
using PrefixPredicate = std::function<bool(const StateVector&)>;
std::optional<Trace> find_segment_violation(
    const Program& p, const Box& box, int max_len, long long input_cap,
    const std::function<PrefixPredicate(const StateVector&)>& make_ok);

struct CheckReport {
    bool pass = true;
    std::optional<Trace> counterexample;
};

// Verifies that on every segment from the box some basis function is strictly
// smaller at the end than at the start.
CheckReport check_segment_decrease(const Program& p, const MeasureBasis& basis, const Box& box,
                                   int max_len, long long input_cap);

}  // namespace termlab
