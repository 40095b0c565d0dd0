#pragma once

#include <optional>
#include <string>
#include <vector>

#include "termlab/interp.hpp"
#include "termlab/prog.hpp"
#include "termlab/ramsey.hpp"

namespace termlab {

// Linear inequality over a pair of states: coeffs[v] weights pre[v] and
// coeffs[n+v] weights post[v]; the weighted sum is compared against bound
// (< when strict, <= otherwise).
struct RelAtom {
    std::vector<long long> coeffs;
    bool strict = false;
    long long bound = 0;

    bool holds(const StateVector& pre, const StateVector& post) const;
};

struct Disjunct {
    std::vector<RelAtom> atoms;
    Affine rank;

    bool covers(const StateVector& pre, const StateVector& post) const;
};

struct InvariantCandidate {
    std::vector<Disjunct> disjuncts;
};

// Block format: a `disjunct:` line opens a block, atom lines relate primed
// (post-state) and unprimed variables, and a `rank:` line names the block's
// witness. `#` starts a comment.
InvariantCandidate parse_invariant(const Program& p, const std::string& text);
InvariantCandidate read_invariant_file(const Program& p, const std::string& path);

struct DwfViolation {
    int disjunct = 0;  // 0-based
    StateVector pre, post;
    bool nonneg_failed = false;  // rank(pre) < 0, as opposed to a missing decrease
};

struct DwfResult {
    bool pass = false;
    std::optional<DwfViolation> violation;
    bool exact = false;  // settled for all integers, not just the box
};

// Each disjunct must be well founded on its own: whenever its atoms hold,
// rank(pre) >= 0 and rank(post) <= rank(pre) - 1. Pairs are scanned over
// box x box; when every atom is a difference bound and every rank is a plain
// variable, the goals are additionally settled by shortest-path entailment
// over the constraint graph.
DwfResult check_dwf(const InvariantCandidate& c, const Box& box);

struct PairCounterexample {
    StateVector pre, post;
};

struct TransInvResult {
    bool pass = false;
    std::optional<PairCounterexample> counterexample;
    long long pairs = 0;  // distinct reachable pairs examined
};

// Checks that (first state, later state) of every execution segment starting
// at a guarded box state satisfies some disjunct. Pairs are explored breadth
// first: one-step pairs from the box, then extensions of covered pairs by one
// more step of the trailing state. Input values range as in for_each_segment.
// The first uncovered pair found is reported; exceeding pair_budget distinct
// pairs is an error.
TransInvResult check_transition_invariant(const Program& p, const InvariantCandidate& c,
                                          const Box& box, long long input_cap,
                                          long long pair_budget = 5'000'000);

// Colors each position pair (i, j), i < j, of a trace by the least disjunct
// index covering (states[i-1], states[j-1]). Errors when a pair is uncovered.
EdgeColoring segment_coloring(const Program& p, const InvariantCandidate& c, const Trace& trace);

}  // namespace termlab
