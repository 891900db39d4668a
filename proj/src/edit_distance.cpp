#include "fuzzdict/edit_distance.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace fuzzdict {

size_t levenshtein_scalar(std::string_view a, std::string_view b) {
    const size_t m = a.size(), n = b.size();
    if (m == 0) return n;
    if (n == 0) return m;
    std::vector<uint32_t> row(n + 1);
    std::iota(row.begin(), row.end(), 0u);
    for (size_t i = 1; i <= m; ++i) {
        uint32_t diag = row[0];
        row[0] = static_cast<uint32_t>(i);
        for (size_t j = 1; j <= n; ++j) {
            uint32_t up = row[j];
            uint32_t cost = a[i - 1] == b[j - 1] ? 0u : 1u;
            row[j] = std::min(std::min(up, row[j - 1]) + 1u, diag + cost);
            diag = up;
        }
    }
    return row[n];
}

#ifndef FUZZDICT_HAVE_AVX2
// Built for a target without the AVX2 translation unit: the vector entry
// points resolve to the scalar kernel.
bool levenshtein_avx2_available() { return false; }
size_t levenshtein_avx2(std::string_view a, std::string_view b) {
    return levenshtein_scalar(a, b);
}
#endif

size_t levenshtein(std::string_view a, std::string_view b) {
    static const bool use_avx2 = levenshtein_avx2_available();
    if (use_avx2 && std::min(a.size(), b.size()) >= 32)
        return levenshtein_avx2(a, b);
    return levenshtein_scalar(a, b);
}

} // namespace fuzzdict
