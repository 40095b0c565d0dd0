#pragma once

#include <optional>
#include <vector>

#include "termlab/interp.hpp"
#include "termlab/measure.hpp"
#include "termlab/prog.hpp"
#include "termlab/tropical.hpp"
#include "termlab/verdict.hpp"

namespace termlab {

// Tightest sound size-change matrix for one case: entry (i,j) is the least L
// with f_j(post) <= f_i(pre) + L on every guarded transition of the case;
// rows index the pre-state measure, columns the post-state measure, so
// left-to-right products follow execution order.
TropicalMatrix extract_matrix(const Program& p, int case_id, const MeasureBasis& basis);

struct AuditViolation {
    StateVector state;
    std::vector<long long> inputs;
    int i = 0;  // 0-based measure indices
    int j = 0;
    long long entry = 0;
    long long pre_value = 0;   // f_i(pre)
    long long post_value = 0;  // f_j(post)
};

// Checks every finite entry of m against every one-step transition of the case
// from guarded states in the box, inputs capped; returns the first violation
// in box order, then input order, then row-major entry order.
std::optional<AuditViolation> audit_matrix(const Program& p, int case_id,
                                           const MeasureBasis& basis, const TropicalMatrix& m,
                                           const Box& box, long long input_cap);

// Least set containing clamp of each generator and closed under clamped
// product, as a deterministically ordered vector.
std::vector<TropicalMatrix> closure(const std::vector<TropicalMatrix>& generators, long long k);

enum class Criterion { A, B };

struct SctCertificate {
    MeasureBasis basis;
    long long clamp = 8;
    Criterion criterion = Criterion::A;
    std::vector<TropicalMatrix> generators;  // clamped at ingestion
    bool generators_clamped = false;         // ingestion moved some entry
    std::vector<TropicalMatrix> closure_elems;
    // Per closure element: criterion A stores a negative diagonal index,
    // criterion B the least power exponent; -1 marks the failing element.
    std::vector<int> witnesses;
    std::optional<int> failing_element;
    bool column_condition_all = false;
};

struct SctResult {
    Verdict verdict = Verdict::Unknown;
    SctCertificate cert;
};

SctResult decide(const Program& p, const MeasureBasis& basis, long long k, Criterion criterion);

}  // namespace termlab
