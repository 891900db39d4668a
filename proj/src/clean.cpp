#include "fuzzdict/clean.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "fuzzdict/edit_distance.hpp"

namespace fuzzdict {

void validate(const CleanerConfig& config) {
    if (config.min_len < 1)
        throw std::invalid_argument("min_len must be at least 1");
    if (config.max_len < config.min_len)
        throw std::invalid_argument("max_len must be >= min_len");
    if (config.prohibited_action == ProhibitedAction::ReplaceChar &&
        config.prohibited_chars.count(config.replacement_char))
        throw std::invalid_argument("replacement_char is itself prohibited");
}

std::map<std::string, size_t> keyword_stats(const std::vector<std::string>& values,
                                            const std::optional<std::set<std::string>>& wordlist) {
    std::map<std::string, size_t> hist;
    for (const auto& v : values) {
        if (v.empty()) continue;
        bool letters = std::all_of(v.begin(), v.end(), [](char c) {
            return std::isalpha(static_cast<uint8_t>(c));
        });
        if (!letters) continue;
        std::string folded(v);
        std::transform(folded.begin(), folded.end(), folded.begin(), [](char c) {
            return static_cast<char>(std::tolower(static_cast<uint8_t>(c)));
        });
        if (wordlist && !wordlist->count(folded)) continue;
        ++hist[folded];
    }
    return hist;
}

CleanResult clean(const std::vector<ExtractedToken>& tokens, const CleanerConfig& config) {
    validate(config);
    CleanResult res;
    CleaningReport& rep = res.report;
    rep.input_count = tokens.size();

    // (1) length filter, (2) prohibited-char policy
    struct Survivor {
        std::string value;
        const ExtractedToken* src;
    };
    std::vector<Survivor> pool;
    pool.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (t.value.size() < config.min_len || t.value.size() > config.max_len) {
            ++rep.dropped_by_length;
            continue;
        }
        std::string v = t.value;
        if (!config.prohibited_chars.empty()) {
            bool has = std::any_of(v.begin(), v.end(), [&](char c) {
                return config.prohibited_chars.count(static_cast<uint8_t>(c)) > 0;
            });
            if (has) {
                if (config.prohibited_action == ProhibitedAction::DropToken) {
                    ++rep.dropped_by_prohibited;
                    continue;
                }
                for (char& c : v) {
                    if (config.prohibited_chars.count(static_cast<uint8_t>(c))) {
                        c = static_cast<char>(config.replacement_char);
                        ++rep.chars_replaced;
                    }
                }
            }
        }
        pool.push_back({std::move(v), &t});
    }

    // (3) exact dedup on value bytes, keeping the smallest location
    std::map<std::string, std::vector<const ExtractedToken*>> groups;
    for (auto& s : pool) groups[s.value].push_back(s.src);
    std::vector<CleanedToken> kept;
    kept.reserve(groups.size());
    for (auto& [value, occurrences] : groups) {
        const ExtractedToken* best = occurrences.front();
        for (const ExtractedToken* o : occurrences)
            if (o->location < best->location) best = o;
        if (occurrences.size() >= 2)
            rep.exact_dup_groups.push_back({value, occurrences.size()});
        kept.push_back({value, best->name_hint, best->location, occurrences.size()});
    }
    // std::map iteration already yields ascending value order.

    // (4) near-duplicates: pairs at edit distance in (0, threshold]
    if (config.levenshtein_threshold > 0 && kept.size() >= 2) {
        const size_t n = kept.size();
        std::vector<size_t> parent(n);
        std::iota(parent.begin(), parent.end(), size_t{0});
        auto find = [&](size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                const auto& a = kept[i].value;
                const auto& b = kept[j].value;
                size_t la = a.size(), lb = b.size();
                size_t gap = la > lb ? la - lb : lb - la;
                if (gap > config.levenshtein_threshold) continue; // distance lower bound
                size_t d = levenshtein(a, b);
                if (d > 0 && d <= config.levenshtein_threshold) {
                    rep.near_dup_pairs.push_back({a, b, d});
                    parent[find(i)] = find(j);
                }
            }
        }
        if (config.near_dup_action == NearDupAction::Remove) {
            // Keep one survivor per connected component: shortest value,
            // ties broken by lexicographically smallest bytes.
            std::map<size_t, size_t> component_best;
            for (size_t i = 0; i < n; ++i) {
                size_t root = find(i);
                auto it = component_best.find(root);
                if (it == component_best.end()) {
                    component_best[root] = i;
                    continue;
                }
                const auto& cur = kept[it->second].value;
                const auto& cand = kept[i].value;
                if (cand.size() < cur.size() ||
                    (cand.size() == cur.size() && cand < cur))
                    it->second = i;
            }
            std::vector<CleanedToken> filtered;
            filtered.reserve(component_best.size());
            for (size_t i = 0; i < n; ++i) {
                if (component_best[find(i)] == i) filtered.push_back(std::move(kept[i]));
                else ++rep.removed_near_dups;
            }
            kept = std::move(filtered);
        }
    }

    // (5) keyword statistics over surviving tokens
    {
        std::vector<std::string> values;
        values.reserve(kept.size());
        for (const auto& k : kept) values.push_back(k.value);
        rep.keyword_histogram = keyword_stats(values, config.wordlist);
    }

    rep.output_count = kept.size();
    res.tokens = std::move(kept);
    return res;
}

} // namespace fuzzdict
