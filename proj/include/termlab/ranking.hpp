#pragma once

#include <optional>
#include <string>
#include <vector>

#include "termlab/interp.hpp"
#include "termlab/prog.hpp"
#include "termlab/verdict.hpp"

namespace termlab {

// Components of a lexicographic ranking function; states failing the guard
// map to the bottom tuple (all zeros).
struct RankingSpec {
    std::vector<Affine> components;
    std::vector<std::string> names;
};

// Comma-separated affine expressions, e.g. "w,x,y,z".
RankingSpec parse_ranking(const Program& p, const std::string& text);

enum class ComponentChange { Unchanged, Decreasing, Unknown };

const char* component_change_name(ComponentChange c);

struct CaseJustification {
    int case_id = 0;
    std::vector<ComponentChange> changes;
    // Index of the accepted lead component: everything before it unchanged,
    // it strictly decreasing and bounded below by 0 on the guard region.
    std::optional<int> lead;
};

struct RankingResult {
    Verdict verdict = Verdict::Unknown;
    std::vector<CaseJustification> cases;
    std::optional<int> failing_case;  // case id
};

// Symbolic per-case classification of every component's change on guarded
// states; sound for all inputs and the whole (unbounded) guard region.
RankingResult verify_ranking(const Program& p, const RankingSpec& r);

struct LexCheck {
    bool pass = true;
    std::optional<Trace> counterexample;
};

// Empirical cross-check: the rank tuple of every segment end must be
// lexicographically below the tuple of its start.
LexCheck check_lex_decrease(const Program& p, const RankingSpec& r, const Box& box, int max_len,
                            long long input_cap);

}  // namespace termlab
