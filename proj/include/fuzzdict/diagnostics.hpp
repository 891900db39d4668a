#pragma once

#include <cstdint>
#include <string>

namespace fuzzdict {

// A non-fatal note attached to a source position. The toolchain never aborts
// on malformed input; it records one of these and keeps going.
struct Diagnostic {
    std::string file;
    uint32_t line = 0;
    uint32_t column = 0;
    std::string message;
};

// Position of a token or extracted value. line/column are 1-based.
struct Location {
    std::string file;
    uint32_t line = 0;
    uint32_t column = 0;

    friend bool operator==(const Location&, const Location&) = default;
    friend auto operator<=>(const Location& a, const Location& b) {
        if (auto c = a.file <=> b.file; c != 0) return c;
        if (auto c = a.line <=> b.line; c != 0) return c;
        return a.column <=> b.column;
    }
};

} // namespace fuzzdict
