#pragma once

#include <stdexcept>
#include <string>

namespace termlab {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Carries the 1-based source position; what() is "line:col: message".
struct ParseError : Error {
    int line = 0;
    int column = 0;

    ParseError(const std::string& message, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line(line),
          column(column) {}
};

}  // namespace termlab
