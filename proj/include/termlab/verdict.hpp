#pragma once

namespace termlab {

enum class Verdict { Terminates, Unknown };

inline const char* verdict_name(Verdict v) {
    return v == Verdict::Terminates ? "terminates" : "unknown";
}

}  // namespace termlab
