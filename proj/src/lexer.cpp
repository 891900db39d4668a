#include "fuzzdict/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace fuzzdict {

namespace {

bool is_ident_start(uint8_t c) {
    // Bytes >= 0x80 are grouped into identifiers so UTF-8 names stay one token.
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_cont(uint8_t c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_hex_digit(uint8_t c) { return std::isxdigit(c); }

int hex_value(uint8_t c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

// Encoding prefixes that may precede a quote. R-forms are raw strings.
bool is_literal_prefix(std::string_view s, bool& raw) {
    raw = !s.empty() && s.back() == 'R';
    std::string_view base = raw ? s.substr(0, s.size() - 1) : s;
    return base.empty() || base == "L" || base == "u" || base == "u8" || base == "U";
}

struct Lexer {
    std::string_view src;
    std::string file;
    size_t pos = 0;
    uint32_t line = 1;
    uint32_t col = 1;
    // Only whitespace (or comments) seen since the last newline.
    bool at_line_start = true;
    // Between a #define head and the end of its logical line.
    bool in_macro_body = false;

    std::vector<SourceToken> tokens;
    std::vector<Diagnostic> diags;

    bool eof() const { return pos >= src.size(); }
    uint8_t peek(size_t off = 0) const {
        return pos + off < src.size() ? static_cast<uint8_t>(src[pos + off]) : 0;
    }

    void advance() {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
            at_line_start = true;
            in_macro_body = false;
        } else {
            ++col;
        }
        ++pos;
    }

    void advance_n(size_t n) {
        for (size_t i = 0; i < n && !eof(); ++i) advance();
    }

    // Backslash immediately followed by a newline joins physical lines.
    bool at_splice() const {
        return peek() == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'));
    }

    void consume_splice() {
        size_t n = peek(1) == '\r' ? 3 : 2;
        bool was_body = in_macro_body;
        advance_n(n);
        in_macro_body = was_body; // splice does not end a macro body
        at_line_start = false;
    }

    void note(uint32_t l, uint32_t c, std::string msg) {
        diags.push_back({file, l, c, std::move(msg)});
    }

    void emit(TokenKind kind, size_t start, uint32_t l, uint32_t c,
              std::optional<std::string> decoded = std::nullopt,
              std::optional<NumericValue> numeric = std::nullopt) {
        SourceToken t;
        t.kind = kind;
        t.raw = std::string(src.substr(start, pos - start));
        t.decoded = std::move(decoded);
        t.numeric = std::move(numeric);
        t.line = l;
        t.column = c;
        t.in_macro_body = in_macro_body;
        tokens.push_back(std::move(t));
        if (kind != TokenKind::Comment) at_line_start = false;
    }

    void run() {
        while (!eof()) {
            uint8_t c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f' || c == '\n') {
                advance();
                continue;
            }
            if (at_splice()) {
                consume_splice();
                continue;
            }
            size_t start = pos;
            uint32_t l = line, co = col;
            if (c == '#' && at_line_start && !in_macro_body) {
                lex_directive(start, l, co);
            } else if (c == '/' && peek(1) == '/') {
                lex_line_comment(start, l, co);
            } else if (c == '/' && peek(1) == '*') {
                lex_block_comment(start, l, co);
            } else if (c == '"') {
                lex_string(start, l, co);
            } else if (c == '\'') {
                lex_char(start, l, co);
            } else if (std::isdigit(c) || (c == '.' && std::isdigit(peek(1)))) {
                lex_number(start, l, co);
            } else if (is_ident_start(c)) {
                lex_identifier(start, l, co);
            } else {
                advance();
                emit(TokenKind::Punctuator, start, l, co);
            }
        }
    }

    // --- directives ---------------------------------------------------

    void skip_directive_ws() {
        while (!eof()) {
            if (peek() == ' ' || peek() == '\t') advance();
            else if (at_splice()) consume_splice();
            else break;
        }
    }

    void lex_directive(size_t start, uint32_t l, uint32_t co) {
        advance(); // '#'
        skip_directive_ws();
        size_t word_begin = pos;
        while (!eof() && is_ident_cont(peek())) advance();
        std::string_view word = src.substr(word_begin, pos - word_begin);
        if (word == "define") {
            // Head covers "#define NAME" plus the parameter list of a
            // function-like macro. The replacement list is lexed as ordinary
            // tokens so literals inside macros stay visible.
            skip_directive_ws();
            while (!eof() && is_ident_cont(peek())) advance();
            if (peek() == '(') { // no space: function-like macro
                while (!eof() && peek() != ')' && peek() != '\n') {
                    if (at_splice()) consume_splice();
                    else advance();
                }
                if (peek() == ')') advance();
            }
            emit(TokenKind::PreprocessorLine, start, l, co);
            in_macro_body = true;
            return;
        }
        // Any other directive: consume the whole logical line, including
        // line splices and block comments that span newlines.
        while (!eof() && peek() != '\n') {
            if (at_splice()) {
                consume_splice();
            } else if (peek() == '/' && peek(1) == '*') {
                advance_n(2);
                while (!eof() && !(peek() == '*' && peek(1) == '/')) advance();
                advance_n(2);
            } else {
                advance();
            }
        }
        emit(TokenKind::PreprocessorLine, start, l, co);
    }

    // --- comments -----------------------------------------------------

    void lex_line_comment(size_t start, uint32_t l, uint32_t co) {
        advance_n(2);
        while (!eof() && peek() != '\n') {
            if (at_splice()) consume_splice(); // comment continues past splice
            else advance();
        }
        emit(TokenKind::Comment, start, l, co);
    }

    void lex_block_comment(size_t start, uint32_t l, uint32_t co) {
        advance_n(2);
        bool closed = false;
        bool crossed_newline = false;
        bool was_body = in_macro_body;
        while (!eof()) {
            if (peek() == '*' && peek(1) == '/') {
                advance_n(2);
                closed = true;
                break;
            }
            if (peek() == '\n') crossed_newline = true;
            advance();
        }
        if (!closed) note(l, co, "unterminated block comment");
        // A comment is whitespace: it keeps a macro body alive across its
        // interior newlines and leaves line-start tracking as if only
        // whitespace had been read.
        in_macro_body = was_body;
        if (crossed_newline) at_line_start = true;
        emit(TokenKind::Comment, start, l, co);
    }

    // --- literals -----------------------------------------------------

    // Scans one quoted fragment starting at pos (which must be at the
    // opening quote). Returns false if it was unterminated.
    bool scan_quoted(char delim, uint32_t l, uint32_t co) {
        advance(); // opening quote
        while (!eof()) {
            uint8_t c = peek();
            if (c == static_cast<uint8_t>(delim)) {
                advance();
                return true;
            }
            if (c == '\n' || (c == '\r' && peek(1) == '\n')) {
                note(l, co, delim == '"' ? "unterminated string literal"
                                         : "unterminated character literal");
                return false;
            }
            if (c == '\\') {
                advance();
                if (eof()) break;
                if (peek() == '\r' && peek(1) == '\n') advance_n(2);
                else advance();
                continue;
            }
            advance();
        }
        note(l, co, delim == '"' ? "unterminated string literal"
                                 : "unterminated character literal");
        return false;
    }

    // Scans a raw string starting at the opening quote; prefix already consumed.
    void scan_raw_string(uint32_t l, uint32_t co) {
        advance(); // '"'
        std::string delim;
        while (!eof() && peek() != '(' && peek() != '\n' && delim.size() < 16) {
            delim.push_back(static_cast<char>(peek()));
            advance();
        }
        if (peek() != '(') {
            note(l, co, "malformed raw string delimiter");
            return;
        }
        advance(); // '('
        std::string closer = ")" + delim + "\"";
        while (!eof()) {
            if (peek() == ')' && src.compare(pos, closer.size(), closer) == 0) {
                advance_n(closer.size());
                return;
            }
            advance();
        }
        note(l, co, "unterminated raw string literal");
    }

    struct Snapshot {
        size_t pos;
        uint32_t line, col;
        bool at_line_start, in_macro_body;
    };
    Snapshot save() const { return {pos, line, col, at_line_start, in_macro_body}; }
    void restore(const Snapshot& s) {
        pos = s.pos;
        line = s.line;
        col = s.col;
        at_line_start = s.at_line_start;
        in_macro_body = s.in_macro_body;
    }

    void decode_fragment(std::string_view frag_raw, uint32_t l, uint32_t co, std::string& out) {
        UnescapeResult r = unescape_string_literal(frag_raw);
        out += r.bytes;
        for (auto& n : r.notes) note(l, co, n);
    }

    // Lexes a string literal (prefix of length prefix_len already part of the
    // token) and merges adjacent fragments separated by whitespace.
    void lex_string_from(size_t start, uint32_t l, uint32_t co, bool raw_form) {
        std::string decoded;
        bool started_in_body = in_macro_body;
        size_t frag_start = start;
        if (raw_form) scan_raw_string(l, co);
        else scan_quoted('"', l, co);
        decode_fragment(src.substr(frag_start, pos - frag_start), l, co, decoded);
        // Adjacent string literal concatenation: only unprefixed continuation
        // fragments across pure whitespace are merged. A macro body's literal
        // never merges with one past the body's terminating newline.
        while (true) {
            Snapshot snap = save();
            bool left_body = false;
            while (!eof()) {
                uint8_t c = peek();
                if (c == '\n' && started_in_body) { left_body = true; break; }
                if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f' || c == '\n')
                    advance();
                else if (at_splice())
                    consume_splice();
                else
                    break;
            }
            if (!left_body && peek() == '"') {
                size_t fs = pos;
                uint32_t fl = line, fc = col;
                scan_quoted('"', fl, fc);
                decode_fragment(src.substr(fs, pos - fs), fl, fc, decoded);
            } else {
                restore(snap);
                break;
            }
        }
        emit(TokenKind::StringLiteral, start, l, co, std::move(decoded));
    }

    void lex_string(size_t start, uint32_t l, uint32_t co) {
        lex_string_from(start, l, co, false);
    }

    void lex_char(size_t start, uint32_t l, uint32_t co) {
        scan_quoted('\'', l, co);
        std::string decoded;
        decode_fragment(src.substr(start, pos - start), l, co, decoded);
        emit(TokenKind::CharLiteral, start, l, co, std::move(decoded));
    }

    // --- numbers --------------------------------------------------------

    void lex_number(size_t start, uint32_t l, uint32_t co) {
        bool is_float = false;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            advance_n(2);
            while (!eof() && (is_hex_digit(peek()) ||
                              (peek() == '\'' && is_hex_digit(peek(1)))))
                advance();
            if (peek() == '.' || peek() == 'p' || peek() == 'P') { // hex float
                is_float = true;
                while (!eof() && (is_hex_digit(peek()) || peek() == '.' || peek() == 'p' ||
                                  peek() == 'P' ||
                                  ((peek() == '+' || peek() == '-') &&
                                   (src[pos - 1] == 'p' || src[pos - 1] == 'P'))))
                    advance();
            }
        } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
            advance_n(2);
            while (!eof() && (peek() == '0' || peek() == '1' ||
                              (peek() == '\'' && (peek(1) == '0' || peek(1) == '1'))))
                advance();
        } else {
            while (!eof() && (std::isdigit(peek()) ||
                              (peek() == '\'' && std::isdigit(peek(1)))))
                advance();
            if (peek() == '.' || peek() == 'e' || peek() == 'E') {
                is_float = true;
                while (!eof() && (std::isdigit(peek()) || peek() == '.' || peek() == 'e' ||
                                  peek() == 'E' ||
                                  ((peek() == '+' || peek() == '-') &&
                                   (src[pos - 1] == 'e' || src[pos - 1] == 'E'))))
                    advance();
            }
        }
        // integer suffixes; also f/F/l/L for floats
        while (!eof() && (peek() == 'u' || peek() == 'U' || peek() == 'l' || peek() == 'L' ||
                          peek() == 'z' || peek() == 'Z' ||
                          (is_float && (peek() == 'f' || peek() == 'F'))))
            advance();

        std::string_view raw = src.substr(start, pos - start);
        NumericValue v;
        if (is_float) {
            v = {0, 10};
        } else {
            ParsedInt p = parse_numeric_literal(raw);
            if (p.overflowed)
                note(l, co, "integer literal exceeds 64 bits, clamped");
            v = {p.magnitude, p.base};
        }
        emit(TokenKind::NumericLiteral, start, l, co, std::nullopt, v);
    }

    // --- identifiers ----------------------------------------------------

    void lex_identifier(size_t start, uint32_t l, uint32_t co) {
        while (!eof() && is_ident_cont(peek())) advance();
        std::string_view name = src.substr(start, pos - start);
        bool raw_form = false;
        if (name.size() <= 3 && is_literal_prefix(name, raw_form)) {
            if (peek() == '"') {
                lex_string_from(start, l, co, raw_form);
                return;
            }
            if (peek() == '\'' && !raw_form) {
                scan_quoted('\'', l, co);
                std::string decoded;
                decode_fragment(src.substr(start, pos - start), l, co, decoded);
                emit(TokenKind::CharLiteral, start, l, co, std::move(decoded));
                return;
            }
        }
        emit(TokenKind::Identifier, start, l, co);
    }
};

} // namespace

TokenStream lex_translation_unit(std::string_view source, std::string file_path) {
    Lexer lx;
    lx.src = source;
    lx.file = file_path;
    lx.run();
    TokenStream out;
    out.file = std::move(file_path);
    out.tokens = std::move(lx.tokens);
    out.diagnostics = std::move(lx.diags);
    return out;
}

UnescapeResult unescape_string_literal(std::string_view raw) {
    UnescapeResult out;
    size_t p = 0;
    // encoding prefix
    while (p < raw.size() && p < 3 && raw[p] != '"' && raw[p] != '\'') ++p;
    bool raw_form = false;
    if (!is_literal_prefix(raw.substr(0, p), raw_form)) raw_form = false;
    if (p >= raw.size()) return out;
    char delim = raw[p];

    if (raw_form && delim == '"') {
        size_t open = raw.find('(', p);
        if (open == std::string_view::npos) {
            out.notes.push_back("malformed raw string literal");
            return out;
        }
        std::string closer = ")" + std::string(raw.substr(p + 1, open - p - 1)) + "\"";
        size_t close = raw.rfind(closer);
        if (close == std::string_view::npos || close < open + 1) {
            out.notes.push_back("unterminated raw string literal");
            out.bytes = std::string(raw.substr(open + 1));
            return out;
        }
        out.bytes = std::string(raw.substr(open + 1, close - open - 1));
        return out;
    }

    size_t i = p + 1;
    while (i < raw.size()) {
        char c = raw[i];
        if (c == delim) break;
        if (c != '\\') {
            out.bytes.push_back(c);
            ++i;
            continue;
        }
        ++i;
        if (i >= raw.size()) {
            out.bytes.push_back('\\');
            out.notes.push_back("trailing backslash in literal");
            break;
        }
        char e = raw[i];
        switch (e) {
        case 'n': out.bytes.push_back('\n'); ++i; break;
        case 't': out.bytes.push_back('\t'); ++i; break;
        case 'r': out.bytes.push_back('\r'); ++i; break;
        case 'a': out.bytes.push_back('\a'); ++i; break;
        case 'b': out.bytes.push_back('\b'); ++i; break;
        case 'f': out.bytes.push_back('\f'); ++i; break;
        case 'v': out.bytes.push_back('\v'); ++i; break;
        case '?': out.bytes.push_back('?'); ++i; break;
        case '\'': out.bytes.push_back('\''); ++i; break;
        case '"': out.bytes.push_back('"'); ++i; break;
        case '\\': out.bytes.push_back('\\'); ++i; break;
        case '\n': ++i; break;                        // line splice
        case '\r':
            ++i;
            if (i < raw.size() && raw[i] == '\n') ++i; // line splice
            break;
        case 'x': {
            ++i;
            if (i >= raw.size() || !is_hex_digit(static_cast<uint8_t>(raw[i]))) {
                out.bytes.push_back('x');
                out.notes.push_back("\\x escape with no hex digits");
                break;
            }
            unsigned v = 0;
            while (i < raw.size() && is_hex_digit(static_cast<uint8_t>(raw[i]))) {
                v = v * 16 + static_cast<unsigned>(hex_value(static_cast<uint8_t>(raw[i])));
                ++i;
            }
            out.bytes.push_back(static_cast<char>(v & 0xFF));
            break;
        }
        default:
            if (e >= '0' && e <= '7') {
                unsigned v = 0;
                int digits = 0;
                while (i < raw.size() && digits < 3 && raw[i] >= '0' && raw[i] <= '7') {
                    v = v * 8 + static_cast<unsigned>(raw[i] - '0');
                    ++i;
                    ++digits;
                }
                out.bytes.push_back(static_cast<char>(v & 0xFF));
            } else {
                out.bytes.push_back(e); // unknown escape: the literal byte
                ++i;
            }
            break;
        }
    }
    return out;
}

ParsedInt parse_numeric_literal(std::string_view raw) {
    ParsedInt out;
    std::string digits;
    digits.reserve(raw.size());
    for (char c : raw)
        if (c != '\'') digits.push_back(c);

    std::string_view s = digits;
    uint8_t base = 10;
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        s.remove_prefix(2);
    } else if (s.size() >= 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
        // Binary literals are parsed for value but reported as base 10 so the
        // hex/octal extraction pass ignores them.
        s.remove_prefix(2);
        uint64_t v = 0;
        bool of = false;
        for (char c : s) {
            if (c != '0' && c != '1') break;
            if (v > (UINT64_MAX >> 1)) of = true;
            v = of ? UINT64_MAX : (v << 1) | static_cast<uint64_t>(c - '0');
        }
        out.magnitude = v;
        out.base = 10;
        out.overflowed = of;
        return out;
    } else if (s.size() >= 2 && s[0] == '0') {
        bool all_octal = true;
        for (size_t i = 1; i < s.size(); ++i) {
            char c = s[i];
            if (c >= '0' && c <= '7') continue;
            if (std::isdigit(static_cast<uint8_t>(c))) { all_octal = false; continue; }
            break; // suffix
        }
        if (all_octal) base = 8;
    }

    uint64_t v = 0;
    bool of = false;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (base == 16 && is_hex_digit(static_cast<uint8_t>(c))) d = hex_value(static_cast<uint8_t>(c));
        else break; // suffix or junk
        if (d >= base && base != 10) break;
        if (!of) {
            uint64_t nv = v * base + static_cast<uint64_t>(d);
            if (v > (UINT64_MAX - static_cast<uint64_t>(d)) / base) of = true;
            else v = nv;
        }
    }
    out.magnitude = of ? UINT64_MAX : v;
    out.base = base;
    out.overflowed = of;
    return out;
}

} // namespace fuzzdict
