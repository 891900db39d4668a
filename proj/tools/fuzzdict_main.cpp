#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzdict/pipeline.hpp"

namespace {

struct CleanerOpts {
    size_t min_len = 2;
    size_t max_len = 128;
    std::string prohibit;
    std::string prohibit_action = "drop";
    std::string replace_char = "_";
    size_t lev_threshold = 0;
    std::string near_dup_action = "report";
    std::string wordlist_path;
};

struct ExtractionOpts {
    std::vector<std::string> extra_comparators;
    std::string pattern = "cmp|strstr";
    std::string endian = "little";
    bool int_text_forms = false;
    bool no_octal = false;
    bool no_resolve = false;
};

struct InputOpts {
    std::vector<std::string> inputs;
    std::vector<std::string> include_globs;
    std::vector<std::string> exclude_globs;
    std::vector<std::string> extensions;
};

void add_input_opts(CLI::App* cmd, InputOpts& o) {
    cmd->add_option("inputs", o.inputs, "source files or directories")
        ->required()
        ->expected(-1);
    cmd->add_option("--include", o.include_globs,
                    "only walk directory files matching a glob (repeatable)");
    cmd->add_option("--exclude", o.exclude_globs,
                    "skip directory files matching a glob (repeatable)");
    cmd->add_option("--ext", o.extensions,
                    "extensions picked up from directories "
                    "(default: .c .h .cc .cpp .cxx .hpp)");
}

void add_cleaner_opts(CLI::App* cmd, CleanerOpts& o) {
    cmd->add_option("--min-len", o.min_len, "minimum token length in bytes")
        ->capture_default_str();
    cmd->add_option("--max-len", o.max_len, "maximum token length in bytes")
        ->capture_default_str();
    cmd->add_option("--prohibit", o.prohibit,
                    "bytes treated as prohibited inside tokens");
    cmd->add_option("--prohibit-action", o.prohibit_action,
                    "what to do with a token holding a prohibited byte")
        ->transform(CLI::IsMember({"drop", "replace"}))
        ->capture_default_str();
    cmd->add_option("--replace-char", o.replace_char,
                    "replacement byte for --prohibit-action=replace")
        ->capture_default_str();
    cmd->add_option("--lev-threshold", o.lev_threshold,
                    "near-duplicate edit-distance threshold (0 disables)")
        ->capture_default_str();
    cmd->add_option("--near-dup-action", o.near_dup_action,
                    "report near-duplicates or remove all but one per group")
        ->transform(CLI::IsMember({"report", "remove"}))
        ->capture_default_str();
    cmd->add_option("--wordlist", o.wordlist_path,
                    "file of words, one per line, to filter keyword statistics");
}

void add_extraction_opts(CLI::App* cmd, ExtractionOpts& o) {
    cmd->add_option("--comparators", o.extra_comparators,
                    "extra comparison function names to harvest (repeatable)");
    cmd->add_option("--comparator-pattern", o.pattern,
                    "case-insensitive regex matched against other callee names")
        ->capture_default_str();
    cmd->add_option("--endian", o.endian, "byte order for integer encodings")
        ->transform(CLI::IsMember({"little", "big", "both"}))
        ->capture_default_str();
    cmd->add_flag("--int-text-forms", o.int_text_forms,
                  "also emit decimal and 0x-hex spellings of integers");
    cmd->add_flag("--no-octal", o.no_octal, "skip octal integer literals");
    cmd->add_flag("--no-resolve-identifiers", o.no_resolve,
                  "do not resolve identifier arguments of comparison calls");
}

// Applies a flat key=value config file to a parsed subcommand. Keys are the
// long option names without the leading dashes; '#' starts a comment.
// Precedence: a value from the file fills an option only when the command
// line did not set it, so defaults < config file < flags.
bool apply_config_file(CLI::App* cmd, const std::string& path, std::string& error) {
    if (path.empty()) return true;
    auto text = fuzzdict::read_file(path);
    if (!text) {
        error = "could not read config file: " + path;
        return false;
    }
    auto trim = [](const std::string& s) {
        size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    std::vector<std::pair<CLI::Option*, std::string>> pending;
    std::istringstream in(*text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        size_t eq = entry.find('=');
        std::string key = eq == std::string::npos ? "" : trim(entry.substr(0, eq));
        if (key.empty()) {
            error = path + ":" + std::to_string(lineno) + ": expected key=value";
            return false;
        }
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) {
            error = path + ":" + std::to_string(lineno) + ": unknown config key: " + key;
            return false;
        }
        if (key == "config") {
            error = path + ":" + std::to_string(lineno) + ": config files do not nest";
            return false;
        }
        if (opt->count() > 0) continue; // set on the command line, flag wins
        pending.emplace_back(opt, trim(entry.substr(eq + 1)));
    }
    try {
        std::set<CLI::Option*> touched;
        for (auto& [opt, value] : pending) {
            opt->add_result(value);
            touched.insert(opt);
        }
        for (CLI::Option* opt : touched) opt->run_callback();
    } catch (const CLI::Error& e) {
        error = path + ": " + e.what();
        return false;
    }
    return true;
}

bool load_wordlist(const std::string& path, fuzzdict::CleanerConfig& cfg,
                   std::string& error) {
    if (path.empty()) return true;
    auto bytes = fuzzdict::read_file(path);
    if (!bytes) {
        error = "could not read wordlist: " + path;
        return false;
    }
    std::set<std::string> words;
    std::istringstream in(*bytes);
    std::string word;
    while (in >> word) {
        for (auto& c : word)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        words.insert(word);
    }
    cfg.wordlist = std::move(words);
    return true;
}

bool to_cleaner(const CleanerOpts& o, fuzzdict::CleanerConfig& cfg, std::string& error) {
    cfg.min_len = o.min_len;
    cfg.max_len = o.max_len;
    for (unsigned char c : o.prohibit) cfg.prohibited_chars.insert(c);
    cfg.prohibited_action = o.prohibit_action == "replace"
                                ? fuzzdict::ProhibitedAction::ReplaceChar
                                : fuzzdict::ProhibitedAction::DropToken;
    if (o.replace_char.size() != 1) {
        error = "--replace-char takes exactly one byte";
        return false;
    }
    cfg.replacement_char = static_cast<uint8_t>(o.replace_char[0]);
    cfg.levenshtein_threshold = o.lev_threshold;
    cfg.near_dup_action = o.near_dup_action == "remove"
                              ? fuzzdict::NearDupAction::Remove
                              : fuzzdict::NearDupAction::ReportOnly;
    return load_wordlist(o.wordlist_path, cfg, error);
}

void to_extraction(const ExtractionOpts& o, fuzzdict::ExtractionConfig& cfg) {
    for (const auto& name : o.extra_comparators) cfg.known_comparators.insert(name);
    cfg.comparator_name_pattern = o.pattern;
    cfg.little_endian = o.endian != "big";
    cfg.big_endian = o.endian != "little";
    cfg.emit_integer_text_forms = o.int_text_forms;
    cfg.include_octal = !o.no_octal;
    cfg.resolve_identifiers = !o.no_resolve;
}

void to_inputs(const InputOpts& o, fuzzdict::RunConfig& cfg) {
    cfg.inputs = o.inputs;
    cfg.include_globs = o.include_globs;
    cfg.exclude_globs = o.exclude_globs;
    if (!o.extensions.empty()) {
        cfg.extensions.clear();
        for (auto ext : o.extensions) {
            if (!ext.empty() && ext[0] != '.') ext.insert(ext.begin(), '.');
            cfg.extensions.insert(ext);
        }
    }
}

void print_diagnostics(const std::vector<fuzzdict::Diagnostic>& diags) {
    for (const auto& d : diags) {
        if (d.line)
            std::fprintf(stderr, "%s:%u:%u: %s\n", d.file.c_str(), d.line, d.column,
                         d.message.c_str());
        else
            std::fprintf(stderr, "%s: %s\n", d.file.c_str(), d.message.c_str());
    }
}

int fail(const std::string& message) {
    std::fprintf(stderr, "fuzzdict: error: %s\n", message.c_str());
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fuzzing dictionary generator for C/C++ source corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fuzzdict 0.1.0");

    // gen: extract + clean + write dictionary and stats report
    auto* gen = app.add_subcommand("gen", "generate a dictionary from sources");
    std::string gen_config;
    gen->add_option("--config", gen_config, "read options from a key=value file");
    InputOpts gen_in;
    CleanerOpts gen_clean;
    ExtractionOpts gen_ex;
    std::string gen_out, gen_report;
    add_input_opts(gen, gen_in);
    add_cleaner_opts(gen, gen_clean);
    add_extraction_opts(gen, gen_ex);
    gen->add_option("-o,--out", gen_out, "dictionary output path")->required();
    gen->add_option("--report", gen_report,
                    "stats report path (default: <out>.stats.json)");

    // extract: token dump, no cleaning
    auto* extract = app.add_subcommand("extract", "dump extracted tokens as JSON");
    std::string extract_config;
    extract->add_option("--config", extract_config, "read options from a key=value file");
    InputOpts ex_in;
    ExtractionOpts ex_ex;
    std::string ex_out;
    add_input_opts(extract, ex_in);
    add_extraction_opts(extract, ex_ex);
    extract->add_option("-o,--out", ex_out, "report path (default: stdout)");

    // clean: re-clean an existing dictionary file
    auto* cln = app.add_subcommand("clean", "clean an existing dictionary file");
    std::string cln_config;
    cln->add_option("--config", cln_config, "read options from a key=value file");
    std::string cln_dict, cln_out, cln_report;
    CleanerOpts cln_clean;
    cln->add_option("dictionary", cln_dict, "dictionary file to clean")->required();
    add_cleaner_opts(cln, cln_clean);
    cln->add_option("-o,--out", cln_out, "cleaned dictionary output path")->required();
    cln->add_option("--report", cln_report,
                    "stats report path (default: <out>.stats.json)");

    // bench: paired with/without-dictionary fuzzing runs
    auto* bench = app.add_subcommand(
        "bench", "measure dictionary benefit on a built-in synthetic target");
    std::string bench_dict, bench_target = "listing1", bench_report;
    std::vector<uint64_t> bench_seeds;
    uint64_t bench_budget = 500000;
    bench->add_option("--dict", bench_dict, "dictionary file to benchmark")->required();
    bench->add_option("--target", bench_target, "synthetic target name")
        ->capture_default_str();
    bench->add_option("--seeds", bench_seeds, "campaign seeds (default: 1..10)")
        ->delimiter(',');
    bench->add_option("--budget", bench_budget, "executions per campaign")
        ->capture_default_str();
    bench->add_option("--report", bench_report, "JSON report path (default: stdout)");

    // stats: summarize a dictionary file
    auto* stats = app.add_subcommand("stats", "summarize a dictionary file");
    std::string stats_dict, stats_wordlist, stats_report;
    bool stats_json = false;
    stats->add_option("dictionary", stats_dict, "dictionary file")->required();
    stats->add_option("--wordlist", stats_wordlist,
                      "word file to filter keyword statistics");
    stats->add_flag("--json", stats_json, "print the JSON report instead of text");
    stats->add_option("--report", stats_report, "also write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    {
        std::string error;
        if (!apply_config_file(gen, gen_config, error) ||
            !apply_config_file(extract, extract_config, error) ||
            !apply_config_file(cln, cln_config, error))
            return fail(error);
    }

    if (gen->parsed()) {
        fuzzdict::RunConfig cfg;
        std::string error;
        to_inputs(gen_in, cfg);
        if (!to_cleaner(gen_clean, cfg.cleaner, error)) return fail(error);
        to_extraction(gen_ex, cfg.extraction);
        cfg.output_path = gen_out;
        cfg.report_path = gen_report;
        auto result = fuzzdict::run_gen(cfg);
        print_diagnostics(result.diagnostics);
        if (!result.ok) return fail(result.error);
        std::string report = cfg.report_path.empty() ? cfg.output_path + ".stats.json"
                                                     : cfg.report_path;
        std::printf("wrote %zu entries from %zu file(s) to %s (stats: %s)\n",
                    result.cleaned.tokens.size(), result.files.size(), gen_out.c_str(),
                    report.c_str());
        return 0;
    }

    if (extract->parsed()) {
        fuzzdict::RunConfig cfg;
        to_inputs(ex_in, cfg);
        to_extraction(ex_ex, cfg.extraction);
        auto result = fuzzdict::run_extract_cmd(cfg);
        if (!result.ok) return fail(result.error);
        if (ex_out.empty()) {
            std::fputs(result.report_json.c_str(), stdout);
        } else if (!fuzzdict::write_file(ex_out, result.report_json)) {
            return fail("could not write report: " + ex_out);
        }
        return 0;
    }

    if (cln->parsed()) {
        fuzzdict::CleanerConfig cleaner;
        std::string error;
        if (!to_cleaner(cln_clean, cleaner, error)) return fail(error);
        auto result = fuzzdict::run_clean_cmd(cln_dict, cleaner);
        print_diagnostics(result.diagnostics);
        if (!result.ok) return fail(result.error);
        if (!fuzzdict::write_file(cln_out, result.dictionary_bytes))
            return fail("could not write dictionary: " + cln_out);
        std::string report = cln_report.empty() ? cln_out + ".stats.json" : cln_report;
        if (!fuzzdict::write_file(report, result.stats_json))
            return fail("could not write stats report: " + report);
        std::printf("wrote %zu entries to %s (stats: %s)\n",
                    result.cleaned.tokens.size(), cln_out.c_str(), report.c_str());
        return 0;
    }

    if (bench->parsed()) {
        auto bytes = fuzzdict::read_file(bench_dict);
        if (!bytes) return fail("could not read dictionary: " + bench_dict);
        auto parsed = fuzzdict::parse_dictionary(*bytes, bench_dict);
        print_diagnostics(parsed.diagnostics);
        fuzzdict::BenchConfig cfg;
        cfg.target_name = bench_target;
        cfg.budget = bench_budget;
        cfg.seeds = bench_seeds;
        if (cfg.seeds.empty())
            for (uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
        for (const auto& entry : parsed.entries) cfg.dictionary.push_back(entry.value);
        auto result = fuzzdict::run_bench(cfg);
        if (!result.ok) return fail(result.error);
        std::printf("%-8s %28s %28s\n", "seed", "with dictionary", "without");
        for (const auto& row : result.per_seed) {
            auto cell = [](const fuzzdict::CoverageReport& r) {
                char buf[64];
                if (r.crash_found)
                    std::snprintf(buf, sizeof buf, "%zu cov, crash @%llu",
                                  r.covered.size(),
                                  static_cast<unsigned long long>(*r.crash_exec));
                else
                    std::snprintf(buf, sizeof buf, "%zu cov, no crash",
                                  r.covered.size());
                return std::string(buf);
            };
            std::printf("%-8llu %28s %28s\n", static_cast<unsigned long long>(row.seed),
                        cell(row.with_dict).c_str(), cell(row.without_dict).c_str());
        }
        std::printf("crashes: %zu/%zu with, %zu/%zu without; "
                    "coverage strictly higher with dictionary in %zu/%zu runs\n",
                    result.crashes_with, result.per_seed.size(), result.crashes_without,
                    result.per_seed.size(), result.strict_dominance,
                    result.per_seed.size());
        if (!bench_report.empty() &&
            !fuzzdict::write_file(bench_report, result.report_json))
            return fail("could not write report: " + bench_report);
        return 0;
    }

    if (stats->parsed()) {
        std::optional<std::set<std::string>> wordlist;
        if (!stats_wordlist.empty()) {
            fuzzdict::CleanerConfig tmp;
            std::string error;
            if (!load_wordlist(stats_wordlist, tmp, error)) return fail(error);
            wordlist = std::move(tmp.wordlist);
        }
        auto result = fuzzdict::run_stats(stats_dict, wordlist);
        if (!result.ok) return fail(result.error);
        std::fputs(stats_json ? result.report_json.c_str() : result.text.c_str(),
                   stdout);
        if (!stats_report.empty() &&
            !fuzzdict::write_file(stats_report, result.report_json))
            return fail("could not write report: " + stats_report);
        return 0;
    }
    return 0;
}
