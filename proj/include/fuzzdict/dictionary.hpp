#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdict/diagnostics.hpp"

namespace fuzzdict {

// One AFL/libFuzzer dictionary entry: name@level="escaped-value".
struct DictionaryEntry {
    std::optional<std::string> name; // 1-64 chars of [A-Za-z0-9_]
    std::string value;               // 1-128 raw bytes
    std::optional<uint32_t> level;   // only meaningful with a name

    friend bool operator==(const DictionaryEntry&, const DictionaryEntry&) = default;
};

// Empty when valid, otherwise a description of the violated invariant.
std::string validate_entry(const DictionaryEntry& entry);

// AFL-style escaping: backslash and double quote get a backslash, bytes
// outside 0x20..0x7E become \xHH with exactly two uppercase hex digits.
std::string escape_value(std::string_view bytes);

// Renders one entry line without a trailing newline. Throws
// std::invalid_argument when validate_entry rejects the entry.
std::string render_entry(const DictionaryEntry& entry);

struct WriteOptions {
    std::string tool_name = "fuzzdict";
    size_t corpus_files = 0;
    uint64_t corpus_fingerprint = 0;
};

// Complete file bytes: '#' header lines, then entries sorted ascending by
// value bytes (ties by name). Colliding names get _2, _3, ... suffixes.
// Output bytes are restricted to 0x09, 0x0A and 0x20-0x7E.
std::string write_dictionary(std::vector<DictionaryEntry> entries,
                             const WriteOptions& options = {});

struct ParsedDictionary {
    std::vector<DictionaryEntry> entries;
    std::vector<uint32_t> lines; // 1-based source line of each entry
    std::vector<Diagnostic> diagnostics;
};

// Lenient parser: blank and '#' lines are skipped, malformed lines produce a
// diagnostic with the line number and are skipped. Accepts everything
// write_dictionary emits: parse(write(E)) == E for canonical E.
ParsedDictionary parse_dictionary(std::string_view bytes,
                                  std::string_view origin = "<dictionary>");

} // namespace fuzzdict
