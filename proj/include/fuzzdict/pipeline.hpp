#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzdict/clean.hpp"
#include "fuzzdict/dictionary.hpp"
#include "fuzzdict/extract.hpp"
#include "fuzzdict/harness.hpp"

namespace fuzzdict {

// End-to-end settings for the gen/extract/clean commands.
struct RunConfig {
    std::vector<std::string> inputs; // files or directories
    std::vector<std::string> include_globs;
    std::vector<std::string> exclude_globs;
    std::set<std::string> extensions{".c", ".h", ".cc", ".cpp", ".cxx", ".hpp"};
    ExtractionConfig extraction;
    CleanerConfig cleaner;
    std::string output_path;
    std::string report_path; // empty: derived from output_path
};

// Wildcard match: '*' matches any run of characters (including '/'),
// '?' any single character.
bool glob_match(std::string_view pattern, std::string_view text);

// FNV-1a over (path, bytes) pairs in order; the corpus identity line in
// dictionary headers.
uint64_t corpus_fingerprint(const std::vector<std::pair<std::string, std::string>>& files);

struct DiscoveredInputs {
    // Sorted by path; explicit file arguments bypass the extension filter.
    std::vector<std::string> paths;
    std::vector<Diagnostic> diagnostics; // unreadable/missing inputs
};

DiscoveredInputs discover_inputs(const RunConfig& config);

// Cleaner survivors turned into named dictionary entries. Names are
// <name-hint>_<counter>, counters per hint in value order; values past the
// 128-byte format cap are truncated with a diagnostic.
struct BuiltEntries {
    std::vector<DictionaryEntry> entries;
    std::vector<Diagnostic> diagnostics;
};

BuiltEntries build_entries(const std::vector<CleanedToken>& tokens);

struct GenResult {
    bool ok = false;
    std::string error; // fatal problem when !ok
    std::vector<std::string> files;
    ExtractionResult extraction;
    CleanResult cleaned;
    std::string dictionary_bytes;
    std::string stats_json;
    std::vector<Diagnostic> diagnostics; // non-fatal, also inside stats_json
};

// The full gen pipeline: discover, extract, clean, render. Deterministic:
// identical inputs and config produce byte-identical dictionary and stats.
GenResult run_gen(const RunConfig& config);

// Extraction-only report (the `extract` command).
struct ExtractCmdResult {
    bool ok = false;
    std::string error;
    ExtractionResult extraction;
    std::string report_json;
};

ExtractCmdResult run_extract_cmd(const RunConfig& config);

// Dictionary-file cleaning (the `clean` command): parses an existing
// dictionary, runs the cleaner pipeline on its values, re-renders.
struct CleanCmdResult {
    bool ok = false;
    std::string error;
    CleanResult cleaned;
    std::string dictionary_bytes;
    std::string stats_json;
    std::vector<Diagnostic> diagnostics;
};

CleanCmdResult run_clean_cmd(const std::string& dict_path, const CleanerConfig& cleaner);

// Paired fuzzing experiment (the `bench` command): per seed, one campaign
// with the dictionary and one without, plus a dominance summary.
struct BenchConfig {
    std::string target_name = "listing1";
    std::vector<uint64_t> seeds;
    uint64_t budget = 500000;
    std::vector<std::string> dictionary;
};

struct BenchSeedResult {
    uint64_t seed = 0;
    CoverageReport with_dict;
    CoverageReport without_dict;
};

struct BenchResult {
    bool ok = false;
    std::string error;
    std::vector<BenchSeedResult> per_seed;
    size_t crashes_with = 0;
    size_t crashes_without = 0;
    size_t strict_dominance = 0; // seeds where covered(with) > covered(without)
    std::string report_json;
};

BenchResult run_bench(const BenchConfig& config);

// Dictionary summary (the `stats` command).
struct StatsResult {
    bool ok = false;
    std::string error;
    std::string report_json;
    std::string text; // human-readable summary
};

StatsResult run_stats(const std::string& dict_path,
                      const std::optional<std::set<std::string>>& wordlist);

// Small IO helpers shared with tests.
std::optional<std::string> read_file(const std::string& path);
bool write_file(const std::string& path, std::string_view bytes);

} // namespace fuzzdict
