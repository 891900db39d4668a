#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fuzzdict/clean.hpp"

using namespace fuzzdict;

namespace {

ExtractedToken tok(std::string value, uint32_t line = 1, uint32_t column = 1,
                   std::string file = "a.c") {
    ExtractedToken t;
    t.value = std::move(value);
    t.name_hint = "str";
    t.location = {std::move(file), line, column};
    return t;
}

std::vector<std::string> out_values(const CleanResult& r) {
    std::vector<std::string> v;
    for (const auto& t : r.tokens) v.push_back(t.value);
    return v;
}

size_t dup_surplus(const CleaningReport& rep) {
    size_t n = 0;
    for (const auto& g : rep.exact_dup_groups) n += g.multiplicity - 1;
    return n;
}

void check_accounting(const CleanResult& r) {
    CHECK(r.report.input_count ==
          r.report.output_count + r.report.dropped_by_length +
              r.report.dropped_by_prohibited + dup_surplus(r.report) +
              r.report.removed_near_dups);
    CHECK(r.report.output_count == r.tokens.size());
}

std::vector<ExtractedToken> as_inputs(const CleanResult& r) {
    std::vector<ExtractedToken> v;
    for (const auto& t : r.tokens) {
        ExtractedToken e;
        e.value = t.value;
        e.name_hint = t.name_hint;
        e.location = t.location;
        v.push_back(std::move(e));
    }
    return v;
}

} // namespace

TEST_CASE("length filter drops short and long values") {
    CleanResult r = clean({tok("a"), tok("acodec"), tok(std::string(300, 'x'))}, {});
    CHECK(out_values(r) == std::vector<std::string>{"acodec"});
    CHECK(r.report.dropped_by_length == 2);
    check_accounting(r);
}

TEST_CASE("min_len 1 keeps single bytes") {
    CleanerConfig cfg;
    cfg.min_len = 1;
    CleanResult r = clean({tok("a")}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"a"});
}

TEST_CASE("boundary lengths are inclusive") {
    CleanResult r = clean({tok("ab"), tok(std::string(128, 'y')),
                           tok(std::string(129, 'z'))},
                          {});
    CHECK(r.tokens.size() == 2);
    CHECK(r.report.dropped_by_length == 1);
}

TEST_CASE("exact dedup keeps the smallest location and counts multiplicity") {
    CleanResult r = clean({tok("acodec", 9, 2), tok("acodec", 3, 7), tok("vcodec", 1, 1)},
                          {});
    REQUIRE(r.report.exact_dup_groups.size() == 1);
    CHECK(r.report.exact_dup_groups[0].value == "acodec");
    CHECK(r.report.exact_dup_groups[0].multiplicity == 2);
    REQUIRE(r.tokens.size() == 2);
    CHECK(r.tokens[0].value == "acodec");
    CHECK(r.tokens[0].location.line == 3);
    CHECK(r.tokens[0].multiplicity == 2);
    CHECK(r.tokens[1].multiplicity == 1);
    check_accounting(r);
}

TEST_CASE("output is sorted ascending by value bytes") {
    CleanResult r = clean({tok("zz"), tok("aa"), tok("mm")}, {});
    CHECK(out_values(r) == std::vector<std::string>{"aa", "mm", "zz"});
}

TEST_CASE("prohibited chars: drop mode") {
    CleanerConfig cfg;
    cfg.prohibited_chars = {uint8_t('\n')};
    CleanResult r = clean({tok("ok"), tok("ba\nd")}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"ok"});
    CHECK(r.report.dropped_by_prohibited == 1);
    check_accounting(r);
}

TEST_CASE("prohibited chars: replace mode rewrites bytes") {
    CleanerConfig cfg;
    cfg.prohibited_chars = {uint8_t('\n'), uint8_t('\t')};
    cfg.prohibited_action = ProhibitedAction::ReplaceChar;
    CleanResult r = clean({tok("a\nb\tc")}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"a_b_c"});
    CHECK(r.report.chars_replaced == 2);
    CHECK(r.report.dropped_by_prohibited == 0);
    check_accounting(r);
}

TEST_CASE("replacement can create new exact duplicates, counted as dups") {
    CleanerConfig cfg;
    cfg.prohibited_chars = {uint8_t('\n'), uint8_t('\t')};
    cfg.prohibited_action = ProhibitedAction::ReplaceChar;
    CleanResult r = clean({tok("a\nb", 1, 1), tok("a\tb", 2, 1)}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"a_b"});
    REQUIRE(r.report.exact_dup_groups.size() == 1);
    CHECK(r.report.exact_dup_groups[0].multiplicity == 2);
    check_accounting(r);
}

TEST_CASE("near-dup detection reports pairs without removing") {
    CleanerConfig cfg;
    cfg.levenshtein_threshold = 1;
    CleanResult r = clean({tok("vcodec"), tok("scodec"), tok("dcodec")}, cfg);
    CHECK(r.tokens.size() == 3);
    CHECK(r.report.near_dup_pairs.size() == 3); // all pairwise at distance 1
    CHECK(r.report.removed_near_dups == 0);
    for (const auto& p : r.report.near_dup_pairs) CHECK(p.distance == 1);
    check_accounting(r);
}

TEST_CASE("near-dup removal keeps one representative per component") {
    CleanerConfig cfg;
    cfg.levenshtein_threshold = 1;
    cfg.near_dup_action = NearDupAction::Remove;
    CleanResult r = clean({tok("vcodec"), tok("scodec"), tok("dcodec")}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"dcodec"});
    CHECK(r.report.removed_near_dups == 2);
    check_accounting(r);
}

TEST_CASE("near-dup removal keeps the shortest value, ties lexicographic") {
    CleanerConfig cfg;
    cfg.levenshtein_threshold = 2;
    cfg.near_dup_action = NearDupAction::Remove;
    CleanResult r = clean({tok("abcd"), tok("abc"), tok("abcde")}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"abc"});
    CHECK(r.report.removed_near_dups == 2);
}

TEST_CASE("near-dup components chain transitively") {
    // ab ~ abc ~ abcd: ab and abcd are at distance 2, linked through abc.
    CleanerConfig cfg;
    cfg.levenshtein_threshold = 1;
    cfg.near_dup_action = NearDupAction::Remove;
    CleanResult r = clean({tok("ab"), tok("abc"), tok("abcd"), tok("zzzz")}, cfg);
    CHECK(out_values(r) == std::vector<std::string>{"ab", "zzzz"});
    check_accounting(r);
}

TEST_CASE("threshold 0 disables near-dup detection") {
    CleanResult r = clean({tok("ab"), tok("ac")}, {});
    CHECK(r.tokens.size() == 2);
    CHECK(r.report.near_dup_pairs.empty());
}

TEST_CASE("keyword stats fold case and skip non-alphabetic values") {
    auto h = keyword_stats({"acodec", "ACODEC", "a1b", "x y"}, std::nullopt);
    REQUIRE(h.size() == 1);
    CHECK(h.at("acodec") == 2);
}

TEST_CASE("keyword stats respect the wordlist") {
    std::optional<std::set<std::string>> wl{{"warning"}};
    auto h = keyword_stats({"error", "warning", "Warning"}, wl);
    REQUIRE(h.size() == 1);
    CHECK(h.at("warning") == 2);
}

TEST_CASE("clean fills the keyword histogram from surviving values") {
    CleanResult r = clean({tok("Alpha"), tok("alpha"), tok("b2")}, {});
    // "Alpha" and "alpha" are distinct values but fold to one keyword.
    CHECK(r.report.keyword_histogram.at("alpha") == 2);
    CHECK(r.report.keyword_histogram.count("b2") == 0);
}

TEST_CASE("invalid configs are rejected") {
    CleanerConfig cfg;
    cfg.min_len = 10;
    cfg.max_len = 5;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg = {};
    cfg.min_len = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg = {};
    cfg.prohibited_chars = {0x5F};
    cfg.prohibited_action = ProhibitedAction::ReplaceChar;
    // The replacement byte itself is prohibited; replacing cannot converge.
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("cleaning is idempotent on a mixed input") {
    CleanerConfig cfg;
    cfg.levenshtein_threshold = 1;
    cfg.near_dup_action = NearDupAction::Remove;
    cfg.prohibited_chars = {uint8_t('\n')};
    CleanResult first = clean({tok("a"), tok("acodec", 5, 1), tok("acodec", 2, 1),
                               tok("vcodec"), tok("li\nne"), tok(std::string(200, 'q'))},
                              cfg);
    CleanResult second = clean(as_inputs(first), cfg);
    CHECK(out_values(second) == out_values(first));
    CHECK(second.report.dropped_by_length == 0);
    CHECK(second.report.dropped_by_prohibited == 0);
    CHECK(second.report.exact_dup_groups.empty());
    CHECK(second.report.removed_near_dups == 0);
}

TEST_CASE("randomized idempotence and accounting") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_int_distribution<int> ch(0, 5);
    const char alphabet[6] = {'a', 'b', 'c', '\n', ' ', 'Z'};
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<ExtractedToken> toks;
        std::uniform_int_distribution<int> n(0, 30);
        int count = n(rng);
        for (int i = 0; i < count; ++i) {
            std::string v;
            int l = len(rng);
            for (int j = 0; j < l; ++j) v.push_back(alphabet[ch(rng)]);
            toks.push_back(tok(v, uint32_t(rng() % 50 + 1), uint32_t(rng() % 10 + 1)));
        }
        CleanerConfig cfg;
        cfg.min_len = 1 + iter % 3;
        cfg.max_len = 8 + iter % 5;
        if (iter % 2) cfg.prohibited_chars = {uint8_t('\n')};
        cfg.prohibited_action =
            (iter % 4 < 2) ? ProhibitedAction::DropToken : ProhibitedAction::ReplaceChar;
        cfg.levenshtein_threshold = iter % 3;
        cfg.near_dup_action = (iter % 5 < 2) ? NearDupAction::Remove
                                             : NearDupAction::ReportOnly;
        CleanResult first = clean(toks, cfg);
        check_accounting(first);
        for (const auto& t : first.tokens) {
            CHECK(t.value.size() >= cfg.min_len);
            CHECK(t.value.size() <= cfg.max_len);
            for (unsigned char b : t.value) CHECK(cfg.prohibited_chars.count(b) == 0);
        }
        CleanResult second = clean(as_inputs(first), cfg);
        CHECK(out_values(second) == out_values(first));
        check_accounting(second);
    }
}
