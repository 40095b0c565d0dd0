#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "termlab/error.hpp"

namespace termlab {

// Entries live in Z together with infinity; infinity absorbs addition and is
// the largest element under min.
inline constexpr long long kInf = std::numeric_limits<long long>::max();

inline long long tropical_add(long long a, long long b) {
    if (a == kInf || b == kInf) return kInf;
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in matrix entry");
    return r;
}

struct TropicalMatrix {
    int n = 0;
    std::vector<long long> e;  // row-major, kInf marks infinity

    TropicalMatrix() = default;
    explicit TropicalMatrix(int dim) : n(dim), e(static_cast<size_t>(dim) * dim, kInf) {}

    static TropicalMatrix identity(int dim);

    long long& at(int i, int j) { return e[static_cast<size_t>(i) * n + j]; }
    long long at(int i, int j) const { return e[static_cast<size_t>(i) * n + j]; }

    auto operator<=>(const TropicalMatrix&) const = default;
};

TropicalMatrix mul(const TropicalMatrix& a, const TropicalMatrix& b);

// Finite v < -k becomes -k; finite v > k becomes infinity. k must be positive.
long long clamp_entry(long long v, long long k);
TropicalMatrix clamp(const TropicalMatrix& a, long long k);

bool has_negative_diagonal(const TropicalMatrix& a);

// Every column holds at most one finite value.
bool column_condition(const TropicalMatrix& a);

// Least p such that the p-th clamped power of a has a negative diagonal entry,
// searching A_1 = clamp(a,k), A_{p+1} = clamp(A_p * A_1, k) until the sequence
// repeats; nullopt when the whole cycle has none.
std::optional<int> power_diag_negative(const TropicalMatrix& a, long long k);

// Text format: first line n, then n rows of n tokens, each an integer or "inf".
std::string format_matrix(const TropicalMatrix& a);
TropicalMatrix parse_matrix(const std::string& text);
TropicalMatrix read_matrix_file(const std::string& path);

}  // namespace termlab
