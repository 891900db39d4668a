#pragma once

#include <cstddef>
#include <string_view>

namespace fuzzdict {

// Unit-cost Levenshtein distance (insert/delete/substitute all cost 1),
// computed over raw bytes.
//
// levenshtein() dispatches at runtime: the AVX2 anti-diagonal kernel when the
// CPU supports it and both inputs are long enough to amortize its setup,
// otherwise the scalar reference kernel. Both kernels are exposed so they can
// be equivalence-tested against each other.
size_t levenshtein(std::string_view a, std::string_view b);

// Reference kernel: two-row dynamic program.
size_t levenshtein_scalar(std::string_view a, std::string_view b);

// Vectorized kernel walking anti-diagonals 8 cells at a time. Falls back to
// the scalar kernel when AVX2 is unavailable or the inputs are short.
size_t levenshtein_avx2(std::string_view a, std::string_view b);

// True when the running CPU supports AVX2 and the kernel was compiled in.
bool levenshtein_avx2_available();

} // namespace fuzzdict
