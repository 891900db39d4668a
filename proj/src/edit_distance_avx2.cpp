// AVX2 edit-distance kernel. Compiled with -mavx2; callers go through the
// runtime dispatch in levenshtein(), which checks CPU support first.

#include "fuzzdict/edit_distance.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <immintrin.h>

namespace fuzzdict {

bool levenshtein_avx2_available() {
    return __builtin_cpu_supports("avx2");
}

// The DP matrix is walked by anti-diagonals k = i + j: every cell on a
// diagonal depends only on the two previous diagonals, so 8 cells are
// computed per step with 32-bit lanes.
//
//   D[i][j] = min(D[i][j-1] + 1, D[i-1][j] + 1, D[i-1][j-1] + cost)
//
// Keyed by row index i, diagonal k stores D[i][k-i]. The left/up terms live
// on diagonal k-1 at i and i-1, the substitution term on k-2 at i-1. b is
// reversed once up front so both byte streams load contiguously.
size_t levenshtein_avx2(std::string_view a, std::string_view b) {
    const size_t m = a.size(), n = b.size();
    if (m == 0 || n == 0) return m + n;
    if (!levenshtein_avx2_available() || m < 16 || n < 16)
        return levenshtein_scalar(a, b);

    std::vector<uint32_t> buf0(m + 9), buf1(m + 9), buf2(m + 9);
    uint32_t* d0 = buf0.data(); // diagonal k-2
    uint32_t* d1 = buf1.data(); // diagonal k-1
    uint32_t* d2 = buf2.data(); // diagonal k
    std::string brev(b.rbegin(), b.rend());

    d0[0] = 0;            // k = 0: D[0][0]
    d1[0] = 1; d1[1] = 1; // k = 1: D[0][1], D[1][0]

    const __m256i one = _mm256_set1_epi32(1);
    for (size_t k = 2; k <= m + n; ++k) {
        const size_t ilo = k > n ? k - n : 0;
        const size_t ihi = std::min(k, m);
        if (ilo == 0) d2[0] = static_cast<uint32_t>(k); // D[0][k]
        if (ihi == k) d2[k] = static_cast<uint32_t>(k); // D[k][0]
        size_t i = std::max<size_t>(1, ilo);
        const size_t iend = ihi == k ? k - 1 : ihi; // inclusive interior bound
        // a index i-1 and brev index n-k+i both advance with i.
        for (; i + 7 <= iend; i += 8) {
            __m256i left = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d1 + i));
            __m256i up   = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d1 + i - 1));
            __m256i diag = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d0 + i - 1));
            __m128i av = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(a.data() + i - 1));
            __m128i bv = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(brev.data() + (n - k + i)));
            __m256i eq = _mm256_cvtepi8_epi32(_mm_cmpeq_epi8(av, bv)); // -1 on match
            __m256i sub = _mm256_add_epi32(diag, _mm256_add_epi32(one, eq)); // diag + cost
            __m256i ins_del = _mm256_add_epi32(_mm256_min_epu32(left, up), one);
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(d2 + i),
                                _mm256_min_epu32(ins_del, sub));
        }
        for (; i <= iend; ++i) { // scalar remainder
            uint32_t cost = a[i - 1] == brev[n - k + i] ? 0u : 1u;
            d2[i] = std::min(std::min(d1[i], d1[i - 1]) + 1u, d0[i - 1] + cost);
        }
        uint32_t* t = d0;
        d0 = d1;
        d1 = d2;
        d2 = t;
    }
    return d1[m]; // diagonal m+n, row m
}

} // namespace fuzzdict
