#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>

#include "fuzzdict/edit_distance.hpp"

using namespace fuzzdict;

namespace {

std::string random_bytes(std::mt19937_64& rng, size_t len, int alphabet) {
    std::uniform_int_distribution<int> d(0, alphabet - 1);
    std::string s(len, '\0');
    for (auto& c : s) c = static_cast<char>('a' + d(rng));
    return s;
}

} // namespace

TEST_CASE("textbook pairs") {
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("flaw", "lawn") == 2);
    CHECK(levenshtein("vcodec", "dcodec") == 1);
    CHECK(levenshtein("abc", "abc") == 0);
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("abc", "") == 3);
    CHECK(levenshtein("", "") == 0);
}

TEST_CASE("distance works on arbitrary bytes") {
    std::string a("\x00\xFF\x10", 3);
    std::string b("\x00\xFE\x10", 3);
    CHECK(levenshtein(a, b) == 1);
}

TEST_CASE("metric properties on random strings") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<size_t> len(0, 24);
    for (int i = 0; i < 300; ++i) {
        std::string a = random_bytes(rng, len(rng), 4);
        std::string b = random_bytes(rng, len(rng), 4);
        std::string c = random_bytes(rng, len(rng), 4);
        size_t ab = levenshtein(a, b);
        CHECK(levenshtein(a, a) == 0);
        CHECK(levenshtein(b, a) == ab);
        size_t lo = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
        CHECK(ab >= lo);
        CHECK(ab <= std::max(a.size(), b.size()));
        CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
    }
}

TEST_CASE("dispatched kernel matches the scalar reference") {
    std::mt19937_64 rng(99);
    for (size_t la = 0; la <= 200; la += 7) {
        for (size_t lb : {size_t(0), size_t(1), size_t(31), size_t(32), size_t(33),
                          size_t(64), size_t(128), size_t(200)}) {
            std::string a = random_bytes(rng, la, 6);
            std::string b = random_bytes(rng, lb, 6);
            size_t ref = levenshtein_scalar(a, b);
            CHECK(levenshtein(a, b) == ref);
            // The AVX2 entry point must agree even when it falls back.
            CHECK(levenshtein_avx2(a, b) == ref);
        }
    }
}

TEST_CASE("vector kernel equivalence on long near-duplicates") {
    if (!levenshtein_avx2_available()) return;
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        std::string a = random_bytes(rng, 64 + i, 3);
        std::string b = a;
        // Mutate a few positions so distances land in 0..6.
        std::uniform_int_distribution<size_t> pos(0, b.size() - 1);
        for (int k = 0; k < i % 4; ++k) b[pos(rng)] ^= 1;
        CHECK(levenshtein_avx2(a, b) == levenshtein_scalar(a, b));
    }
}
