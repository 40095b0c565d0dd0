#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "termlab/error.hpp"

namespace termlab {

using StateVector = std::vector<long long>;

// Affine form over the declared variables: sum of coeffs[v]*vars[v] plus constant.
struct Affine {
    std::vector<long long> coeffs;
    long long constant = 0;

    long long eval(const StateVector& s) const;
    bool is_zero() const;
    bool operator==(const Affine&) const = default;
};

struct InputAny {
    bool operator==(const InputAny&) const = default;
};

// input(>= lower): the environment picks any value >= lower evaluated on the pre-state.
struct InputAtLeast {
    Affine lower;
    bool operator==(const InputAtLeast&) const = default;
};

// var div d with d >= 2, floor semantics.
struct DivByConst {
    int var = 0;
    long long divisor = 2;
    bool operator==(const DivByConst&) const = default;
};

using UpdateRhs = std::variant<Affine, InputAny, InputAtLeast, DivByConst>;

struct Update {
    int var = 0;
    UpdateRhs rhs;
    bool operator==(const Update&) const = default;
};

enum class Cmp { Gt, Ge };

struct GuardAtom {
    int var = 0;
    Cmp cmp = Cmp::Gt;
    long long bound = 0;
    bool operator==(const GuardAtom&) const = default;
};

// All right-hand sides are evaluated in the pre-state (simultaneous assignment);
// variables without an update are unchanged.
struct Case {
    int id = 0;
    std::vector<Update> updates;
    bool operator==(const Case&) const = default;
};

struct Program {
    std::string name;
    std::vector<std::string> vars;
    std::vector<GuardAtom> guard;
    std::vector<Case> cases;

    int var_index(const std::string& v) const;  // -1 when not declared
    // Least value the variable can take on the guard region, when the guard bounds it.
    std::optional<long long> guard_lower(int var) const;
    bool operator==(const Program&) const = default;
};

Program parse_program(const std::string& text);

// Canonical text form; parse_program(pretty_print(p)) == p.
std::string pretty_print(const Program& p);

// Affine expression over p's variables, e.g. "x + 2*y - 3".
Affine parse_affine(const Program& p, const std::string& text);
std::string print_affine(const Program& p, const Affine& a);

bool guard_holds(const Program& p, const StateVector& s);

// Count of input-kind updates in the case; each consumes one value per step.
int input_arity(const Case& c);

// Writes the post-state into out, which must not alias s. inputs feeds the
// input-kind updates in update order. Throws when the guard fails, the case id
// is unknown, the input count is wrong, or an input violates its lower bound.
void apply_case(const Program& p, const StateVector& s, int case_id,
                const std::vector<long long>& inputs, StateVector& out);

StateVector successors(const Program& p, const StateVector& s, int case_id,
                       const std::vector<long long>& inputs);

// Exact supremum/infimum of an affine form over the guard region, which is
// unbounded above in every variable; nullopt means unbounded in that direction.
std::optional<long long> guard_sup(const Program& p, const Affine& a);
std::optional<long long> guard_inf(const Program& p, const Affine& a);

long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);
long long floor_div(long long a, long long b);

}  // namespace termlab
