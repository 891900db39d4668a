#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fuzzdict/extract.hpp"

namespace fuzzdict {

enum class ProhibitedAction : uint8_t { DropToken, ReplaceChar };
enum class NearDupAction : uint8_t { ReportOnly, Remove };

struct CleanerConfig {
    size_t min_len = 2;   // bytes, inclusive
    size_t max_len = 128; // bytes, inclusive
    std::set<uint8_t> prohibited_chars; // default: nothing prohibited
    ProhibitedAction prohibited_action = ProhibitedAction::DropToken;
    uint8_t replacement_char = 0x5F; // '_'
    size_t levenshtein_threshold = 0; // 0 disables near-dup detection
    NearDupAction near_dup_action = NearDupAction::ReportOnly;
    std::optional<std::set<std::string>> wordlist; // lowercase words
};

// Throws std::invalid_argument when the config is inconsistent.
void validate(const CleanerConfig& config);

struct DupGroup {
    std::string value;
    size_t multiplicity = 0; // occurrences in the input, >= 2
};

struct NearDupPair {
    std::string a, b;
    size_t distance = 0;
};

struct CleaningReport {
    size_t input_count = 0;
    size_t dropped_by_length = 0;
    size_t dropped_by_prohibited = 0;
    size_t chars_replaced = 0; // bytes rewritten in replace mode
    std::vector<DupGroup> exact_dup_groups;
    std::vector<NearDupPair> near_dup_pairs;
    size_t removed_near_dups = 0;
    std::map<std::string, size_t> keyword_histogram;
    size_t output_count = 0;
};

struct CleanedToken {
    std::string value;
    std::string name_hint;
    Location location;     // of the kept occurrence
    size_t multiplicity = 1;
};

struct CleanResult {
    std::vector<CleanedToken> tokens; // ascending by value bytes
    CleaningReport report;
};

// Pipeline, in fixed order: length filter, prohibited-char policy, exact
// dedup (keeping the occurrence with the smallest (file,line,column)),
// near-duplicate detection/removal, keyword statistics. Idempotent: cleaning
// the output again changes nothing. Counts satisfy
//   input = output + dropped_by_length + dropped_by_prohibited
//         + sum(multiplicity - 1) + removed_near_dups.
CleanResult clean(const std::vector<ExtractedToken>& tokens, const CleanerConfig& config);

// Lowercase-folded counts of values made of ASCII letters only, optionally
// filtered to a wordlist.
std::map<std::string, size_t> keyword_stats(const std::vector<std::string>& values,
                                            const std::optional<std::set<std::string>>& wordlist);

} // namespace fuzzdict
