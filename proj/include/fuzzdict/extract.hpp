#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdict/diagnostics.hpp"
#include "fuzzdict/lexer.hpp"

namespace fuzzdict {

enum class Provenance : uint8_t {
    StringLiteral,
    HexLiteral,
    OctalLiteral,
    ComparisonArg,
    ResolvedIdentifierArg,
    StaticConstGlobal,
    GlobalArrayElement,
    GlobalVarInit,
};

const char* provenance_name(Provenance p);

struct ExtractedToken {
    std::string value; // raw bytes, non-empty, capped at 4096
    Provenance provenance = Provenance::StringLiteral;
    std::string function_name; // comparison/resolved provenance only
    int arg_index = -1;        // comparison provenance only
    Location location;
    std::string name_hint; // [A-Za-z0-9_]+, seed for dictionary entry names
};

struct ExtractionConfig {
    // Callees harvested unconditionally.
    std::set<std::string> known_comparators{
        "strstr", "strcasecmp", "strncasecmp", "strcmp", "strncmp", "memcmp"};
    // Case-insensitive regex searched against every other callee name.
    std::string comparator_name_pattern = "cmp|strstr";
    bool little_endian = true;
    bool big_endian = false;
    bool emit_integer_text_forms = false;
    bool include_octal = true;
    bool resolve_identifiers = true;
};

// Minimal power-of-two-width byte encodings of a magnitude, one per enabled
// endianness, plus optional ASCII decimal / 0x-hex spellings. Returned as a
// set: the 1-byte encodings coincide for both endiannesses.
std::set<std::string> encode_integer(uint64_t magnitude, const ExtractionConfig& config);

// A callee name followed by a parenthesized argument list.
struct CallSite {
    std::string callee;
    bool pattern_matched = false; // matched the regex, not the known set
    // Token index ranges [begin, end) into the stream, one per argument.
    std::vector<std::pair<size_t, size_t>> arg_spans;
    uint32_t line = 0;
    uint32_t column = 0;
};

// Every string and char literal with at least one decoded byte, one token
// per occurrence.
std::vector<ExtractedToken> extract_string_literals(const TokenStream& ts);

// Byte encodings of every hex (and, when enabled, octal) integer literal.
std::vector<ExtractedToken> extract_hex_oct_literals(const TokenStream& ts,
                                                     const ExtractionConfig& config);

// Call sites whose callee is a known comparator or matches the name pattern.
// A site with an unbalanced argument list is dropped with a diagnostic.
std::vector<CallSite> find_comparison_calls(const TokenStream& ts,
                                            const ExtractionConfig& config,
                                            std::vector<Diagnostic>& diagnostics);

// String literals found in argument positions 0 and 1 of comparison calls.
// For strncmp/strncasecmp/memcmp with a literal integer length argument n,
// 0 < n < len, the harvested bytes are truncated to n.
std::vector<ExtractedToken> extract_comparison_args(const std::vector<CallSite>& sites,
                                                    const TokenStream& ts);

// For plain-identifier arguments at positions 0 and 1, scans the same file
// for `name = "..."` / `name[...] = "..."` initializers and emits each one
// found.
std::vector<ExtractedToken> resolve_identifier_args(const std::vector<CallSite>& sites,
                                                    const TokenStream& ts);

// File-scope declarations whose specifiers include both `static` and `const`:
// scalar integer initializers via encode_integer, string initializers as
// bytes, brace lists one token per literal element.
std::vector<ExtractedToken> extract_static_const_globals(const TokenStream& ts,
                                                         const ExtractionConfig& config);

// Remaining file-scope declarations (not static-const) with literal
// initializers; disjoint from extract_static_const_globals by construction.
std::vector<ExtractedToken> extract_global_arrays_and_vars(const TokenStream& ts,
                                                           const ExtractionConfig& config);

struct ExtractionResult {
    std::vector<ExtractedToken> tokens; // multiset, deterministic order
    std::vector<Diagnostic> diagnostics;
};

// Runs every pass over each (path, bytes) input and merges the results,
// ordered by file path, location, pass, then value.
ExtractionResult run_extraction(const ExtractionConfig& config,
                                const std::vector<std::pair<std::string, std::string>>& files);

} // namespace fuzzdict
