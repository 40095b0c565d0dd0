#pragma once

#include <string>
#include <vector>

#include "termlab/prog.hpp"

namespace termlab {

// The measure functions tracked by size-change matrices: affine forms with
// nonnegative coefficients and zero constant, each positive under the guard.
struct MeasureBasis {
    std::vector<Affine> funcs;
    std::vector<std::string> names;

    bool operator==(const MeasureBasis&) const = default;
};

// Comma-separated affine expressions over p's variables, e.g. "x,y,x+y".
MeasureBasis parse_measures(const Program& p, const std::string& text);

// One measure per declared variable.
MeasureBasis default_basis(const Program& p);

// Throws Error unless every function has a nonzero coefficient, all
// coefficients are nonnegative, constants are zero, and every weighted
// variable has a guard atom forcing it >= 1.
void validate_basis(const Program& p, const MeasureBasis& basis);

}  // namespace termlab
