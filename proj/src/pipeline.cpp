#include "fuzzdict/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace fuzzdict {

bool glob_match(std::string_view pattern, std::string_view text) {
    size_t p = 0, t = 0;
    size_t star_p = std::string_view::npos, star_t = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p, ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star_p = p++;
            star_t = t;
        } else if (star_p != std::string_view::npos) {
            p = star_p + 1;
            t = ++star_t;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

uint64_t corpus_fingerprint(const std::vector<std::pair<std::string, std::string>>& files) {
    uint64_t h = 0xcbf29ce484222325ull;
    auto fold = [&h](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        h ^= 0;
        h *= 0x100000001b3ull; // separator byte
    };
    for (const auto& [path, content] : files) {
        fold(path);
        fold(content);
    }
    return h;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buf.str();
}

bool write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    return out.good();
}

namespace {

bool globs_allow(const RunConfig& config, const std::string& path) {
    if (!config.include_globs.empty()) {
        bool any = false;
        for (const auto& g : config.include_globs)
            if (glob_match(g, path)) {
                any = true;
                break;
            }
        if (!any) return false;
    }
    for (const auto& g : config.exclude_globs)
        if (glob_match(g, path)) return false;
    return true;
}

} // namespace

DiscoveredInputs discover_inputs(const RunConfig& config) {
    DiscoveredInputs out;
    std::vector<std::string> paths;
    for (const auto& input : config.inputs) {
        std::error_code ec;
        fs::path p(input);
        if (fs::is_regular_file(p, ec)) {
            // Explicit files are taken as-is, no extension or glob filter.
            paths.push_back(p.lexically_normal().generic_string());
            continue;
        }
        if (fs::is_directory(p, ec)) {
            for (fs::recursive_directory_iterator it(p, ec), end; !ec && it != end;
                 it.increment(ec)) {
                if (!it->is_regular_file(ec) || ec) continue;
                std::string path = it->path().lexically_normal().generic_string();
                std::string ext = it->path().extension().string();
                if (!config.extensions.count(ext)) continue;
                if (!globs_allow(config, path)) continue;
                paths.push_back(std::move(path));
            }
            continue;
        }
        out.diagnostics.push_back({input, 0, 0, "input not found or not readable"});
    }
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    out.paths = std::move(paths);
    return out;
}

BuiltEntries build_entries(const std::vector<CleanedToken>& tokens) {
    BuiltEntries out;
    std::map<std::string, size_t> counters;
    for (const auto& tok : tokens) {
        std::string hint = tok.name_hint.empty() ? "tok" : tok.name_hint;
        char name[64];
        std::snprintf(name, sizeof name, "%s_%04zu", hint.c_str(), ++counters[hint]);
        DictionaryEntry entry;
        entry.name = name;
        entry.value = tok.value;
        if (entry.value.size() > 128) {
            entry.value.resize(128);
            out.diagnostics.push_back({tok.location.file, tok.location.line,
                                       tok.location.column,
                                       "value truncated to the 128-byte entry cap"});
        }
        out.entries.push_back(std::move(entry));
    }
    return out;
}

namespace {

ordered_json diagnostics_json(const std::vector<Diagnostic>& diags) {
    ordered_json arr = ordered_json::array();
    for (const auto& d : diags)
        arr.push_back({{"file", d.file},
                       {"line", d.line},
                       {"column", d.column},
                       {"message", d.message}});
    return arr;
}

std::string fingerprint_hex(uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

ordered_json cleaning_json(const CleaningReport& report) {
    ordered_json dups = ordered_json::array();
    for (const auto& g : report.exact_dup_groups)
        dups.push_back({{"value", escape_value(g.value)}, {"multiplicity", g.multiplicity}});
    ordered_json pairs = ordered_json::array();
    for (const auto& p : report.near_dup_pairs)
        pairs.push_back({{"a", escape_value(p.a)},
                         {"b", escape_value(p.b)},
                         {"distance", p.distance}});
    ordered_json keywords = ordered_json::object();
    for (const auto& [word, count] : report.keyword_histogram) keywords[word] = count;
    return {{"input_count", report.input_count},
            {"dropped_by_length", report.dropped_by_length},
            {"dropped_by_prohibited", report.dropped_by_prohibited},
            {"chars_replaced", report.chars_replaced},
            {"exact_dup_groups", dups},
            {"near_dup_pairs", pairs},
            {"removed_near_dups", report.removed_near_dups},
            {"keywords", keywords},
            {"output_count", report.output_count}};
}

std::string dump(const ordered_json& j) {
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

// True when two paths name the same file, tolerating nonexistent ones.
bool same_path(const std::string& a, const std::string& b) {
    std::error_code ec;
    fs::path ca = fs::weakly_canonical(a, ec);
    if (ec) ca = fs::path(a).lexically_normal();
    fs::path cb = fs::weakly_canonical(b, ec);
    if (ec) cb = fs::path(b).lexically_normal();
    return ca == cb;
}

} // namespace

GenResult run_gen(const RunConfig& config) {
    GenResult result;
    try {
        validate(config.cleaner);
    } catch (const std::invalid_argument& e) {
        result.error = e.what();
        return result;
    }

    DiscoveredInputs discovered = discover_inputs(config);
    for (auto& d : discovered.diagnostics) result.diagnostics.push_back(d);
    if (discovered.paths.empty()) {
        result.error = "no input files found";
        return result;
    }

    std::string report_path = config.report_path;
    if (report_path.empty() && !config.output_path.empty())
        report_path = config.output_path + ".stats.json";
    if (!config.output_path.empty()) {
        for (const auto& p : discovered.paths) {
            if (same_path(p, config.output_path) || same_path(p, report_path)) {
                result.error = "output path is among the input files: " + p;
                return result;
            }
        }
    }

    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& p : discovered.paths) {
        auto bytes = read_file(p);
        if (!bytes) {
            result.diagnostics.push_back({p, 0, 0, "could not read file"});
            continue;
        }
        files.emplace_back(p, std::move(*bytes));
    }
    if (files.empty()) {
        result.error = "none of the input files could be read";
        return result;
    }
    for (const auto& [p, bytes] : files) result.files.push_back(p);

    result.extraction = run_extraction(config.extraction, files);
    result.cleaned = clean(result.extraction.tokens, config.cleaner);
    BuiltEntries built = build_entries(result.cleaned.tokens);
    for (auto& d : built.diagnostics) result.diagnostics.push_back(d);

    WriteOptions opts;
    opts.corpus_files = files.size();
    opts.corpus_fingerprint = corpus_fingerprint(files);
    result.dictionary_bytes = write_dictionary(built.entries, opts);

    std::map<std::string, size_t> by_provenance;
    for (const auto& tok : result.extraction.tokens)
        ++by_provenance[provenance_name(tok.provenance)];
    ordered_json prov = ordered_json::object();
    for (const auto& [name, count] : by_provenance) prov[name] = count;

    ordered_json corpus_files_json = ordered_json::array();
    for (const auto& [p, bytes] : files) corpus_files_json.push_back(p);

    std::vector<Diagnostic> all_diags = result.diagnostics;
    for (const auto& d : result.extraction.diagnostics) all_diags.push_back(d);

    ordered_json stats = {
        {"tool", "fuzzdict"},
        {"corpus",
         {{"files", corpus_files_json},
          {"fingerprint", fingerprint_hex(opts.corpus_fingerprint)}}},
        {"extraction",
         {{"tokens", result.extraction.tokens.size()}, {"by_provenance", prov}}},
        {"cleaning", cleaning_json(result.cleaned.report)},
        {"dictionary",
         {{"path", config.output_path}, {"entries", built.entries.size()}}},
        {"diagnostics", diagnostics_json(all_diags)},
    };
    result.stats_json = dump(stats);

    if (!config.output_path.empty()) {
        if (!write_file(config.output_path, result.dictionary_bytes)) {
            result.error = "could not write dictionary: " + config.output_path;
            return result;
        }
        if (!write_file(report_path, result.stats_json)) {
            result.error = "could not write stats report: " + report_path;
            return result;
        }
    }
    result.ok = true;
    return result;
}

ExtractCmdResult run_extract_cmd(const RunConfig& config) {
    ExtractCmdResult result;
    DiscoveredInputs discovered = discover_inputs(config);
    if (discovered.paths.empty()) {
        result.error = "no input files found";
        return result;
    }
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& p : discovered.paths) {
        auto bytes = read_file(p);
        if (bytes) files.emplace_back(p, std::move(*bytes));
    }
    if (files.empty()) {
        result.error = "none of the input files could be read";
        return result;
    }
    result.extraction = run_extraction(config.extraction, files);

    ordered_json tokens = ordered_json::array();
    for (const auto& tok : result.extraction.tokens) {
        ordered_json t = {{"value", escape_value(tok.value)},
                          {"provenance", provenance_name(tok.provenance)},
                          {"file", tok.location.file},
                          {"line", tok.location.line},
                          {"column", tok.location.column},
                          {"hint", tok.name_hint}};
        if (!tok.function_name.empty()) t["function"] = tok.function_name;
        if (tok.arg_index >= 0) t["arg_index"] = tok.arg_index;
        tokens.push_back(std::move(t));
    }
    ordered_json report = {
        {"tool", "fuzzdict"},
        {"tokens", tokens},
        {"diagnostics", diagnostics_json(result.extraction.diagnostics)},
    };
    result.report_json = dump(report);
    result.ok = true;
    return result;
}

CleanCmdResult run_clean_cmd(const std::string& dict_path, const CleanerConfig& cleaner) {
    CleanCmdResult result;
    try {
        validate(cleaner);
    } catch (const std::invalid_argument& e) {
        result.error = e.what();
        return result;
    }
    auto bytes = read_file(dict_path);
    if (!bytes) {
        result.error = "could not read dictionary: " + dict_path;
        return result;
    }
    ParsedDictionary parsed = parse_dictionary(*bytes, dict_path);
    result.diagnostics = parsed.diagnostics;

    std::vector<ExtractedToken> tokens;
    for (size_t i = 0; i < parsed.entries.size(); ++i) {
        const auto& entry = parsed.entries[i];
        ExtractedToken tok;
        tok.value = entry.value;
        tok.location = {dict_path, parsed.lines[i], 1};
        std::string hint = entry.name.value_or("tok");
        // str_0012 came from this tool; recover the bare hint.
        size_t us = hint.find_last_of('_');
        if (us != std::string::npos && us + 1 < hint.size() &&
            std::all_of(hint.begin() + static_cast<long>(us) + 1, hint.end(),
                        [](char c) { return c >= '0' && c <= '9'; }))
            hint.resize(us);
        tok.name_hint = hint.empty() ? "tok" : hint;
        tokens.push_back(std::move(tok));
    }

    result.cleaned = clean(tokens, cleaner);
    BuiltEntries built = build_entries(result.cleaned.tokens);
    for (auto& d : built.diagnostics) result.diagnostics.push_back(d);

    WriteOptions opts;
    opts.corpus_files = 1;
    opts.corpus_fingerprint = corpus_fingerprint({{dict_path, *bytes}});
    result.dictionary_bytes = write_dictionary(built.entries, opts);

    ordered_json stats = {
        {"tool", "fuzzdict"},
        {"source", {{"path", dict_path}, {"entries", parsed.entries.size()}}},
        {"cleaning", cleaning_json(result.cleaned.report)},
        {"dictionary", {{"entries", built.entries.size()}}},
        {"diagnostics", diagnostics_json(result.diagnostics)},
    };
    result.stats_json = dump(stats);
    result.ok = true;
    return result;
}

namespace {

ordered_json campaign_json(const CoverageReport& report) {
    ordered_json j = {{"covered", report.covered.size()},
                      {"crash", report.crash_found},
                      {"total_execs", report.total_execs}};
    if (report.crash_exec) j["crash_exec"] = *report.crash_exec;
    return j;
}

} // namespace

BenchResult run_bench(const BenchConfig& config) {
    BenchResult result;
    if (config.target_name != "listing1") {
        result.error = "unknown target: " + config.target_name;
        return result;
    }
    if (config.seeds.empty()) {
        result.error = "no seeds given";
        return result;
    }
    if (config.budget == 0) {
        result.error = "budget must be positive";
        return result;
    }
    SyntheticTarget target = listing1_target();

    for (uint64_t seed : config.seeds) {
        BenchSeedResult row;
        row.seed = seed;
        FuzzConfig with;
        with.seed = seed;
        with.budget = config.budget;
        with.dictionary = config.dictionary;
        row.with_dict = run_campaign(target, with);

        FuzzConfig without = with;
        without.dictionary.clear();
        row.without_dict = run_campaign(target, without);

        if (row.with_dict.crash_found) ++result.crashes_with;
        if (row.without_dict.crash_found) ++result.crashes_without;
        if (row.with_dict.covered.size() > row.without_dict.covered.size())
            ++result.strict_dominance;
        result.per_seed.push_back(std::move(row));
    }

    ordered_json per_seed = ordered_json::array();
    for (const auto& row : result.per_seed)
        per_seed.push_back({{"seed", row.seed},
                            {"with", campaign_json(row.with_dict)},
                            {"without", campaign_json(row.without_dict)}});
    ordered_json report = {
        {"tool", "fuzzdict"},
        {"target", config.target_name},
        {"budget", config.budget},
        {"constraints", constraint_count(target)},
        {"dictionary_tokens", config.dictionary.size()},
        {"per_seed", per_seed},
        {"summary",
         {{"seeds", config.seeds.size()},
          {"crashes_with", result.crashes_with},
          {"crashes_without", result.crashes_without},
          {"strict_dominance", result.strict_dominance}}},
    };
    result.report_json = dump(report);
    result.ok = true;
    return result;
}

StatsResult run_stats(const std::string& dict_path,
                      const std::optional<std::set<std::string>>& wordlist) {
    StatsResult result;
    auto bytes = read_file(dict_path);
    if (!bytes) {
        result.error = "could not read dictionary: " + dict_path;
        return result;
    }
    ParsedDictionary parsed = parse_dictionary(*bytes, dict_path);

    size_t named = 0, bytes_total = 0;
    size_t len_min = 0, len_max = 0;
    std::vector<std::string> values;
    for (const auto& entry : parsed.entries) {
        if (entry.name) ++named;
        bytes_total += entry.value.size();
        if (values.empty() || entry.value.size() < len_min) len_min = entry.value.size();
        if (entry.value.size() > len_max) len_max = entry.value.size();
        values.push_back(entry.value);
    }
    auto keywords = keyword_stats(values, wordlist);

    ordered_json kw = ordered_json::object();
    for (const auto& [word, count] : keywords) kw[word] = count;
    ordered_json report = {
        {"tool", "fuzzdict"},
        {"path", dict_path},
        {"entries", parsed.entries.size()},
        {"named", named},
        {"bytes_total", bytes_total},
        {"value_len_min", len_min},
        {"value_len_max", len_max},
        {"keywords", kw},
        {"parse_diagnostics", diagnostics_json(parsed.diagnostics)},
    };
    result.report_json = dump(report);

    std::ostringstream text;
    text << dict_path << ": " << parsed.entries.size() << " entries (" << named
         << " named), " << bytes_total << " value bytes";
    if (!parsed.entries.empty())
        text << ", lengths " << len_min << ".." << len_max;
    text << "\n";
    if (!keywords.empty()) {
        text << "keywords:";
        for (const auto& [word, count] : keywords) text << " " << word << "=" << count;
        text << "\n";
    }
    if (!parsed.diagnostics.empty())
        text << parsed.diagnostics.size() << " line(s) skipped by the parser\n";
    result.text = text.str();
    result.ok = true;
    return result;
}

} // namespace fuzzdict
