#include "fuzzdict/extract.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <regex>
#include <tuple>

namespace fuzzdict {

namespace {

// Hard safety cap applied to every emitted value, pre-cleaning.
constexpr size_t kValueCap = 4096;

std::string cap_value(std::string v) {
    if (v.size() > kValueCap) v.resize(kValueCap);
    return v;
}

std::string sanitize_ident(std::string_view s) {
    std::string out;
    out.reserve(std::min<size_t>(s.size(), 40));
    for (char c : s) {
        if (out.size() >= 40) break;
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_';
        out.push_back(ok ? c : '_');
    }
    if (out.empty()) out = "fn";
    return out;
}

int pass_rank(Provenance p) {
    switch (p) {
    case Provenance::StringLiteral: return 0;
    case Provenance::HexLiteral:
    case Provenance::OctalLiteral: return 1;
    case Provenance::ComparisonArg: return 2;
    case Provenance::ResolvedIdentifierArg: return 3;
    case Provenance::StaticConstGlobal: return 4;
    case Provenance::GlobalArrayElement:
    case Provenance::GlobalVarInit: return 5;
    }
    return 6;
}

Location loc_of(const TokenStream& ts, const SourceToken& t) {
    return {ts.file, t.line, t.column};
}

bool is_punct(const SourceToken& t, char c) {
    return t.kind == TokenKind::Punctuator && t.raw.size() == 1 && t.raw[0] == c;
}

// Next token index skipping comments; tokens.size() when none.
size_t next_code(const TokenStream& ts, size_t i) {
    ++i;
    while (i < ts.tokens.size() && ts.tokens[i].kind == TokenKind::Comment) ++i;
    return i;
}

} // namespace

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::StringLiteral: return "string_literal";
    case Provenance::HexLiteral: return "hex_literal";
    case Provenance::OctalLiteral: return "octal_literal";
    case Provenance::ComparisonArg: return "comparison_arg";
    case Provenance::ResolvedIdentifierArg: return "resolved_identifier_arg";
    case Provenance::StaticConstGlobal: return "static_const_global";
    case Provenance::GlobalArrayElement: return "global_array_element";
    case Provenance::GlobalVarInit: return "global_var_init";
    }
    return "unknown";
}

std::set<std::string> encode_integer(uint64_t magnitude, const ExtractionConfig& config) {
    size_t width = 1;
    if (magnitude > 0xFFull) width = 2;
    if (magnitude > 0xFFFFull) width = 4;
    if (magnitude > 0xFFFFFFFFull) width = 8;

    std::set<std::string> out;
    if (config.little_endian) {
        std::string le(width, '\0');
        for (size_t i = 0; i < width; ++i)
            le[i] = static_cast<char>((magnitude >> (8 * i)) & 0xFF);
        out.insert(std::move(le));
    }
    if (config.big_endian) {
        std::string be(width, '\0');
        for (size_t i = 0; i < width; ++i)
            be[width - 1 - i] = static_cast<char>((magnitude >> (8 * i)) & 0xFF);
        out.insert(std::move(be));
    }
    if (config.emit_integer_text_forms) {
        out.insert(std::to_string(magnitude));
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(magnitude));
        out.insert(buf);
    }
    return out;
}

std::vector<ExtractedToken> extract_string_literals(const TokenStream& ts) {
    std::vector<ExtractedToken> out;
    for (const auto& t : ts.tokens) {
        if (t.kind != TokenKind::StringLiteral && t.kind != TokenKind::CharLiteral) continue;
        if (!t.decoded || t.decoded->empty()) continue;
        ExtractedToken e;
        e.value = cap_value(*t.decoded);
        e.provenance = Provenance::StringLiteral;
        e.location = loc_of(ts, t);
        e.name_hint = "str";
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ExtractedToken> extract_hex_oct_literals(const TokenStream& ts,
                                                     const ExtractionConfig& config) {
    std::vector<ExtractedToken> out;
    for (const auto& t : ts.tokens) {
        if (t.kind != TokenKind::NumericLiteral || !t.numeric) continue;
        bool hex = t.numeric->base == 16;
        bool oct = t.numeric->base == 8 && config.include_octal;
        if (!hex && !oct) continue;
        for (const auto& enc : encode_integer(t.numeric->magnitude, config)) {
            ExtractedToken e;
            e.value = cap_value(enc);
            e.provenance = hex ? Provenance::HexLiteral : Provenance::OctalLiteral;
            e.location = loc_of(ts, t);
            e.name_hint = hex ? "hex" : "oct";
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<CallSite> find_comparison_calls(const TokenStream& ts,
                                            const ExtractionConfig& config,
                                            std::vector<Diagnostic>& diagnostics) {
    std::vector<CallSite> out;
    std::optional<std::regex> pattern;
    try {
        pattern.emplace(config.comparator_name_pattern,
                        std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error&) {
        diagnostics.push_back({ts.file, 0, 0,
                               "invalid comparator name pattern: " +
                                   config.comparator_name_pattern});
    }

    const auto& toks = ts.tokens;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != TokenKind::Identifier) continue;
        size_t open = next_code(ts, i);
        if (open >= toks.size() || !is_punct(toks[open], '(')) continue;

        const std::string& name = toks[i].raw;
        bool known = config.known_comparators.count(name) > 0;
        bool matched = !known && pattern && std::regex_search(name, *pattern);
        if (!known && !matched) continue;

        CallSite site;
        site.callee = name;
        site.pattern_matched = matched;
        site.line = toks[i].line;
        site.column = toks[i].column;

        // Argument spans: top-level commas split, any nesting protected.
        int depth = 1;
        size_t arg_begin = open + 1;
        bool balanced = false;
        size_t j = open + 1;
        for (; j < toks.size(); ++j) {
            const auto& t = toks[j];
            if (t.kind == TokenKind::Comment) continue;
            if (is_punct(t, '(') || is_punct(t, '[') || is_punct(t, '{')) {
                ++depth;
            } else if (is_punct(t, ')') || is_punct(t, ']') || is_punct(t, '}')) {
                --depth;
                if (depth == 0) {
                    if (j > arg_begin || !site.arg_spans.empty())
                        site.arg_spans.emplace_back(arg_begin, j);
                    balanced = true;
                    break;
                }
            } else if (depth == 1 && is_punct(t, ',')) {
                site.arg_spans.emplace_back(arg_begin, j);
                arg_begin = j + 1;
            }
        }
        if (!balanced) {
            diagnostics.push_back({ts.file, toks[i].line, toks[i].column,
                                   "unbalanced argument list in call to " + name});
            continue;
        }
        out.push_back(std::move(site));
    }
    return out;
}

namespace {

// Collects the non-comment token indices of a span, stripping balanced
// outer parentheses.
std::vector<size_t> span_tokens(const TokenStream& ts, size_t begin, size_t end) {
    std::vector<size_t> idx;
    for (size_t i = begin; i < end; ++i)
        if (ts.tokens[i].kind != TokenKind::Comment) idx.push_back(i);
    while (idx.size() >= 2 && is_punct(ts.tokens[idx.front()], '(') &&
           is_punct(ts.tokens[idx.back()], ')')) {
        // only strip if the parens actually pair with each other
        int depth = 0;
        bool wraps = true;
        for (size_t k = 0; k < idx.size(); ++k) {
            const auto& t = ts.tokens[idx[k]];
            if (is_punct(t, '(')) ++depth;
            else if (is_punct(t, ')')) {
                --depth;
                if (depth == 0 && k + 1 != idx.size()) { wraps = false; break; }
            }
        }
        if (!wraps) break;
        idx.erase(idx.begin());
        idx.pop_back();
    }
    return idx;
}

} // namespace

std::vector<ExtractedToken> extract_comparison_args(const std::vector<CallSite>& sites,
                                                    const TokenStream& ts) {
    static const std::set<std::string> length_bounded{"strncmp", "strncasecmp", "memcmp"};
    std::vector<ExtractedToken> out;
    for (const auto& site : sites) {
        // Optional truncation length from argument 2.
        std::optional<uint64_t> trunc;
        if (length_bounded.count(site.callee) && site.arg_spans.size() >= 3) {
            auto idx = span_tokens(ts, site.arg_spans[2].first, site.arg_spans[2].second);
            if (idx.size() == 1) {
                const auto& t = ts.tokens[idx[0]];
                if (t.kind == TokenKind::NumericLiteral && t.numeric)
                    trunc = t.numeric->magnitude;
            }
        }
        for (int ai = 0; ai < 2 && ai < static_cast<int>(site.arg_spans.size()); ++ai) {
            auto [b, e] = site.arg_spans[ai];
            for (size_t i = b; i < e; ++i) {
                const auto& t = ts.tokens[i];
                if (t.kind != TokenKind::StringLiteral && t.kind != TokenKind::CharLiteral)
                    continue;
                if (!t.decoded || t.decoded->empty()) continue;
                std::string value = *t.decoded;
                if (trunc && *trunc > 0 && *trunc < value.size())
                    value.resize(static_cast<size_t>(*trunc));
                ExtractedToken tok;
                tok.value = cap_value(std::move(value));
                tok.provenance = Provenance::ComparisonArg;
                tok.function_name = site.callee;
                tok.arg_index = ai;
                tok.location = loc_of(ts, t);
                tok.name_hint = "cmp_" + sanitize_ident(site.callee);
                out.push_back(std::move(tok));
            }
        }
    }
    return out;
}

std::vector<ExtractedToken> resolve_identifier_args(const std::vector<CallSite>& sites,
                                                    const TokenStream& ts) {
    // Index every `name = "literal"` / `name[...] = "literal"` followed by
    // ';' or ',' in this file. Macro bodies are not declarations.
    std::map<std::string, std::vector<size_t>> initializers;
    const auto& toks = ts.tokens;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != TokenKind::Identifier || toks[i].in_macro_body) continue;
        size_t j = next_code(ts, i);
        if (j < toks.size() && is_punct(toks[j], '[')) {
            int depth = 1;
            ++j;
            while (j < toks.size() && depth > 0) {
                if (is_punct(toks[j], '[')) ++depth;
                else if (is_punct(toks[j], ']')) --depth;
                ++j;
            }
            while (j < toks.size() && toks[j].kind == TokenKind::Comment) ++j;
        }
        if (j >= toks.size() || !is_punct(toks[j], '=')) continue;
        size_t k = next_code(ts, j);
        if (k >= toks.size() || toks[k].kind != TokenKind::StringLiteral) continue;
        if (!toks[k].decoded || toks[k].decoded->empty()) continue;
        size_t e = next_code(ts, k);
        if (e < toks.size() && (is_punct(toks[e], ';') || is_punct(toks[e], ',')))
            initializers[toks[i].raw].push_back(k);
    }

    std::vector<ExtractedToken> out;
    for (const auto& site : sites) {
        for (int ai = 0; ai < 2 && ai < static_cast<int>(site.arg_spans.size()); ++ai) {
            auto idx = span_tokens(ts, site.arg_spans[ai].first, site.arg_spans[ai].second);
            if (idx.size() != 1) continue;
            const auto& arg = ts.tokens[idx[0]];
            if (arg.kind != TokenKind::Identifier) continue;
            auto it = initializers.find(arg.raw);
            if (it == initializers.end()) continue;
            for (size_t k : it->second) {
                ExtractedToken tok;
                tok.value = cap_value(*ts.tokens[k].decoded);
                tok.provenance = Provenance::ResolvedIdentifierArg;
                tok.function_name = site.callee;
                tok.location = loc_of(ts, ts.tokens[k]);
                tok.name_hint = "ref_" + sanitize_ident(site.callee);
                out.push_back(std::move(tok));
            }
        }
    }
    return out;
}

namespace {

// One file-scope declaration statement, as collected by the brace-depth walk.
struct Statement {
    std::vector<size_t> idx; // token indices, ';' excluded
};

// Walks the stream at brace depth 0 and yields declaration statements.
// Function/struct bodies (braces not preceded by a top-level '=') are
// skipped wholesale; initializer braces stay inside their statement.
std::vector<Statement> file_scope_statements(const TokenStream& ts) {
    std::vector<Statement> out;
    Statement cur;
    bool has_top_eq = false;
    int depth = 0;
    enum class BraceMode { None, Initializer, BodySkip } mode = BraceMode::None;

    for (size_t i = 0; i < ts.tokens.size(); ++i) {
        const auto& t = ts.tokens[i];
        if (t.kind == TokenKind::Comment || t.kind == TokenKind::PreprocessorLine ||
            t.in_macro_body)
            continue;
        if (depth == 0) {
            if (is_punct(t, ';')) {
                if (!cur.idx.empty()) out.push_back(std::move(cur));
                cur = {};
                has_top_eq = false;
                continue;
            }
            if (is_punct(t, '{')) {
                depth = 1;
                mode = has_top_eq ? BraceMode::Initializer : BraceMode::BodySkip;
                if (mode == BraceMode::Initializer) cur.idx.push_back(i);
                continue;
            }
            if (is_punct(t, '}')) { // stray close at file scope
                cur = {};
                has_top_eq = false;
                continue;
            }
            if (is_punct(t, '=')) has_top_eq = true;
            cur.idx.push_back(i);
        } else {
            if (is_punct(t, '{')) ++depth;
            else if (is_punct(t, '}')) --depth;
            if (mode == BraceMode::Initializer) cur.idx.push_back(i);
            if (depth == 0) {
                if (mode == BraceMode::BodySkip) {
                    cur = {};
                    has_top_eq = false;
                }
                mode = BraceMode::None;
            }
        }
    }
    if (!cur.idx.empty() && has_top_eq) out.push_back(std::move(cur));
    return out;
}

// Splits a token-index list on commas at combined ()[]{} depth 0.
std::vector<std::vector<size_t>> split_top_commas(const TokenStream& ts,
                                                  const std::vector<size_t>& idx) {
    std::vector<std::vector<size_t>> groups(1);
    int depth = 0;
    for (size_t i : idx) {
        const auto& t = ts.tokens[i];
        if (is_punct(t, '(') || is_punct(t, '[') || is_punct(t, '{')) ++depth;
        else if (is_punct(t, ')') || is_punct(t, ']') || is_punct(t, '}')) --depth;
        else if (depth == 0 && is_punct(t, ',')) {
            groups.emplace_back();
            continue;
        }
        groups.back().push_back(i);
    }
    return groups;
}

struct GlobalsSink {
    const TokenStream& ts;
    const ExtractionConfig& config;
    std::vector<ExtractedToken>& out;
    Provenance string_prov;
    Provenance int_prov;
    std::string hint;

    void emit_literal(size_t tok_idx) {
        const auto& t = ts.tokens[tok_idx];
        if (t.kind == TokenKind::StringLiteral || t.kind == TokenKind::CharLiteral) {
            if (!t.decoded || t.decoded->empty()) return;
            ExtractedToken e;
            e.value = cap_value(*t.decoded);
            e.provenance = string_prov;
            e.location = loc_of(ts, t);
            e.name_hint = hint;
            out.push_back(std::move(e));
        } else if (t.kind == TokenKind::NumericLiteral && t.numeric) {
            for (const auto& enc : encode_integer(t.numeric->magnitude, config)) {
                ExtractedToken e;
                e.value = cap_value(enc);
                e.provenance = int_prov;
                e.location = loc_of(ts, t);
                e.name_hint = hint;
                out.push_back(std::move(e));
            }
        }
    }

    // A brace list: one token per literal element, nested lists flattened.
    void emit_brace_list(const std::vector<size_t>& idx) {
        // idx[0] == '{', idx.back() == '}' (best effort)
        std::vector<size_t> interior(idx.begin() + 1,
                                     idx.size() >= 2 ? idx.end() - 1 : idx.end());
        for (const auto& elem : split_top_commas(ts, interior)) {
            auto e = strip_parens(elem);
            if (e.empty()) continue;
            if (is_punct(ts.tokens[e.front()], '{')) {
                emit_brace_list(e);
            } else if (e.size() == 1) {
                emit_literal(e[0]);
            }
        }
    }

    std::vector<size_t> strip_parens(std::vector<size_t> idx) const {
        while (idx.size() >= 2 && is_punct(ts.tokens[idx.front()], '(') &&
               is_punct(ts.tokens[idx.back()], ')')) {
            int depth = 0;
            bool wraps = true;
            for (size_t k = 0; k < idx.size(); ++k) {
                const auto& t = ts.tokens[idx[k]];
                if (is_punct(t, '(')) ++depth;
                else if (is_punct(t, ')')) {
                    --depth;
                    if (depth == 0 && k + 1 != idx.size()) { wraps = false; break; }
                }
            }
            if (!wraps) break;
            idx.erase(idx.begin());
            idx.pop_back();
        }
        return idx;
    }
};

std::vector<ExtractedToken> collect_globals(const TokenStream& ts,
                                            const ExtractionConfig& config,
                                            bool want_static_const) {
    std::vector<ExtractedToken> out;
    for (const auto& stmt : file_scope_statements(ts)) {
        auto groups = split_top_commas(ts, stmt.idx);
        if (groups.empty() || groups[0].empty()) continue;

        // Declaration specifiers live in the first group, before its '='.
        bool has_static = false, has_const = false;
        for (size_t i : groups[0]) {
            const auto& t = ts.tokens[i];
            if (is_punct(t, '=')) break;
            if (t.kind == TokenKind::Identifier) {
                if (t.raw == "static") has_static = true;
                else if (t.raw == "const") has_const = true;
            }
        }
        bool is_static_const = has_static && has_const;
        if (is_static_const != want_static_const) continue;

        for (const auto& group : groups) {
            // Split declarator / initializer at the first '=' outside nesting.
            int depth = 0;
            size_t eq_pos = group.size();
            for (size_t k = 0; k < group.size(); ++k) {
                const auto& t = ts.tokens[group[k]];
                if (is_punct(t, '(') || is_punct(t, '[') || is_punct(t, '{')) ++depth;
                else if (is_punct(t, ')') || is_punct(t, ']') || is_punct(t, '}')) --depth;
                else if (depth == 0 && is_punct(t, '=')) { eq_pos = k; break; }
            }
            if (eq_pos == group.size() || eq_pos + 1 >= group.size()) continue;

            // Declared name: last identifier outside any nesting. The
            // declarator is an array when brackets follow that name.
            bool found_name = false;
            size_t last_name = 0;
            {
                int d = 0;
                for (size_t k = 0; k < eq_pos; ++k) {
                    const auto& t = ts.tokens[group[k]];
                    if (is_punct(t, '(') || is_punct(t, '[')) ++d;
                    else if (is_punct(t, ')') || is_punct(t, ']')) --d;
                    else if (d == 0 && t.kind == TokenKind::Identifier) {
                        found_name = true;
                        last_name = k;
                    }
                }
            }
            if (!found_name) continue;
            bool is_array = false;
            for (size_t k = last_name + 1; k < eq_pos; ++k)
                if (is_punct(ts.tokens[group[k]], '[')) { is_array = true; break; }

            // Scalar declarations report as var-init; arrays and brace lists
            // as array elements. Static-const keeps one provenance for both.
            GlobalsSink sink{ts, config, out,
                             want_static_const ? Provenance::StaticConstGlobal
                                               : Provenance::GlobalVarInit,
                             want_static_const ? Provenance::StaticConstGlobal
                                               : Provenance::GlobalVarInit,
                             want_static_const ? "sconst" : "gvar"};

            std::vector<size_t> init(group.begin() + static_cast<long>(eq_pos) + 1,
                                     group.end());
            init = sink.strip_parens(init);
            if (init.empty()) continue;
            if (is_punct(ts.tokens[init.front()], '{')) {
                if (!want_static_const) {
                    sink.string_prov = Provenance::GlobalArrayElement;
                    sink.int_prov = Provenance::GlobalArrayElement;
                    sink.hint = "arr";
                }
                sink.emit_brace_list(init);
            } else if (init.size() == 1) {
                if (!want_static_const && is_array) {
                    sink.string_prov = Provenance::GlobalArrayElement;
                    sink.int_prov = Provenance::GlobalArrayElement;
                    sink.hint = "arr";
                }
                sink.emit_literal(init[0]);
            }
        }
    }
    return out;
}

} // namespace

std::vector<ExtractedToken> extract_static_const_globals(const TokenStream& ts,
                                                         const ExtractionConfig& config) {
    return collect_globals(ts, config, true);
}

std::vector<ExtractedToken> extract_global_arrays_and_vars(const TokenStream& ts,
                                                           const ExtractionConfig& config) {
    return collect_globals(ts, config, false);
}

ExtractionResult run_extraction(const ExtractionConfig& config,
                                const std::vector<std::pair<std::string, std::string>>& files) {
    ExtractionResult result;
    for (const auto& [path, bytes] : files) {
        TokenStream ts = lex_translation_unit(bytes, path);
        for (auto& d : ts.diagnostics) result.diagnostics.push_back(std::move(d));

        auto append = [&](std::vector<ExtractedToken>&& v) {
            for (auto& e : v) result.tokens.push_back(std::move(e));
        };
        append(extract_string_literals(ts));
        append(extract_hex_oct_literals(ts, config));
        auto sites = find_comparison_calls(ts, config, result.diagnostics);
        append(extract_comparison_args(sites, ts));
        if (config.resolve_identifiers) append(resolve_identifier_args(sites, ts));
        append(extract_static_const_globals(ts, config));
        append(extract_global_arrays_and_vars(ts, config));
    }
    std::stable_sort(result.tokens.begin(), result.tokens.end(),
                     [](const ExtractedToken& a, const ExtractedToken& b) {
                         int ra = pass_rank(a.provenance), rb = pass_rank(b.provenance);
                         return std::tie(a.location.file, a.location.line, a.location.column,
                                         ra, a.value) <
                                std::tie(b.location.file, b.location.line, b.location.column,
                                         rb, b.value);
                     });
    return result;
}

} // namespace fuzzdict
