#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "termlab/interp.hpp"
#include "termlab/tropical.hpp"

namespace termlab {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// One analysis result, serialized with a fixed field order so identical
// invocations produce byte-identical documents (timing aside).
struct Report {
    std::string program;  // empty when the operation has no program
    std::string method;
    std::string verdict = "n/a";
    Json certificate;
    Json checked_domain = "exact";
    std::vector<std::string> diagnostics;
    double timing_ms = 0.0;

    Json to_json() const;
};

Json matrix_json(const TropicalMatrix& m);
Json state_json(const StateVector& s);
Json trace_json(const Trace& t);
Json box_domain(const Box& box, long long input_cap);

void write_report(const Report& r, const std::string& path);

}  // namespace termlab
