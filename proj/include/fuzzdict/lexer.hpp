#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzdict/diagnostics.hpp"

namespace fuzzdict {

enum class TokenKind : uint8_t {
    Identifier,
    StringLiteral,
    CharLiteral,
    NumericLiteral,
    Punctuator,
    PreprocessorLine,
    Comment,
};

struct NumericValue {
    uint64_t magnitude = 0;
    uint8_t base = 10; // 8, 10 or 16
};

struct SourceToken {
    TokenKind kind = TokenKind::Punctuator;
    // Bytes as they appear in the file. For string literals merged by
    // adjacent-literal concatenation this is the whole source slice from the
    // first fragment's opening quote to the last fragment's closing quote.
    std::string raw;
    // Execution-time bytes; present exactly for string and char literals.
    std::optional<std::string> decoded;
    // Present exactly for numeric literals. Floating literals are carried as
    // numeric tokens with magnitude 0, base 10 so nothing downstream picks
    // them up.
    std::optional<NumericValue> numeric;
    uint32_t line = 1;
    uint32_t column = 1;
    // True for tokens lexed from a #define replacement list. Literal passes
    // still see them; the file-scope declaration passes skip them.
    bool in_macro_body = false;
};

struct TokenStream {
    std::string file;
    std::vector<SourceToken> tokens;
    std::vector<Diagnostic> diagnostics;
};

// Best-effort C/C++ tokenizer. No preprocessing, no parsing; operates on raw
// bytes so non-UTF-8 input is fine. Never fails: malformed constructs produce
// a diagnostic and a best-effort token.
TokenStream lex_translation_unit(std::string_view source, std::string file_path);

struct UnescapeResult {
    std::string bytes;
    // Messages for malformed escapes (currently only \x with no hex digits).
    std::vector<std::string> notes;
};

// Decodes a complete literal as spelled, including delimiters and any
// encoding prefix (L, u, u8, U, optionally followed by R for raw strings).
// Returns the execution-time byte sequence: standard escapes decode to their
// C values, \xHH.. takes the low byte, octal escapes take 1-3 digits, an
// unknown escape \c decodes to the literal byte c, and a backslash-newline is
// a line splice (decodes to nothing). Raw strings return the delimited bytes
// verbatim. Encoding prefixes are stripped; bytes are taken as spelled, never
// widened.
UnescapeResult unescape_string_literal(std::string_view raw);

struct ParsedInt {
    uint64_t magnitude = 0;
    uint8_t base = 10;
    bool overflowed = false; // clamped to 2^64-1
};

// Parses a C integer literal spelling: 0x/0X prefix -> base 16, leading 0
// with more digits -> base 8, otherwise base 10. Digit separators (') and
// u/U/l/L/z/Z suffixes are ignored. Values past 64 bits clamp to 2^64-1 and
// set overflowed.
ParsedInt parse_numeric_literal(std::string_view raw);

} // namespace fuzzdict
