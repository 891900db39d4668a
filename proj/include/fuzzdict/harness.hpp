#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fuzzdict {

// Constraints over a fixed-size input buffer. A chain models nested ifs:
// constraint j is evaluated only when constraints 0..j-1 all held, and the
// chain's flag is set when every constraint holds.
struct BytesEqual {
    uint32_t offset = 0;
    std::string bytes;
};

// Exclusive on both ends: lo < u32(offset) < hi. u32 reads little-endian.
struct U32InRange {
    uint32_t offset = 0;
    uint32_t lo = 0, hi = 0;
};

// u32(offset_a) * u32(offset_b) == const_a * const_b as 64-bit products.
struct U32ProductEq {
    uint32_t offset_a = 0, offset_b = 0;
    uint32_t const_a = 0, const_b = 0;
};

using Constraint = std::variant<BytesEqual, U32InRange, U32ProductEq>;

struct FlagChain {
    std::vector<Constraint> constraints;
};

struct SyntheticTarget {
    std::string name;
    uint32_t input_size = 0;
    std::vector<FlagChain> chains;
};

size_t constraint_count(const SyntheticTarget& target);

// The crash check fires only when every chain's flag is set. Constraint ids
// number the constraints consecutively, chain by chain. Appends the ids that
// were evaluated and satisfied by this input; throws std::invalid_argument
// when the input length differs from target.input_size.
bool evaluate_target(const SyntheticTarget& target, std::string_view input,
                     std::vector<uint32_t>& covered);

// A 64-byte target of eight flag chains over consecutive u32 pairs:
// chain c constrains u32s at offsets 8c and 8c+4 with two range checks and a
// product equality. Chains 0 and 7 carry their own fixed constant sets; the
// middle chains reuse them by a fixed rule (even chains take chain 0's set,
// odd chains take chain 7's), so the target is fully reproducible.
SyntheticTarget listing1_target();

// splitmix64: tiny seedable generator, deterministic across platforms for a
// given build of this library.
struct Rng {
    uint64_t state = 0;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

enum class Mutator : uint8_t {
    BitFlip,
    RandomByte,
    InterestingValue,
    DictInsert,
    DictOverwrite,
};

std::map<Mutator, uint32_t> default_mutation_weights();

struct FuzzConfig {
    uint64_t seed = 1;
    uint64_t budget = 1; // executions
    std::vector<std::string> dictionary;
    std::map<Mutator, uint32_t> weights = default_mutation_weights();
    uint32_t max_stacked = 4; // 1..max_stacked operators per mutation
};

// Throws std::invalid_argument on a meaningless config.
void validate(const FuzzConfig& config, uint32_t input_size);

// Applies 1..max_stacked weighted operators to a copy of the input. When no
// dictionary token fits the input, the dictionary operators are skipped and
// another operator is drawn. Deterministic given (input, rng state, config).
std::string mutate(std::string input, Rng& rng, const FuzzConfig& config);

struct CoverageReport {
    std::set<uint32_t> covered;
    std::map<uint32_t, uint64_t> first_cover_exec; // constraint id -> exec index
    bool crash_found = false;
    std::optional<uint64_t> crash_exec;
    uint64_t total_execs = 0;
};

// Round-robin greybox campaign: the corpus starts with one all-zero input,
// inputs covering a previously-uncovered constraint are added, and the run
// stops at the budget or the first crash. Fully deterministic per seed.
CoverageReport run_campaign(const SyntheticTarget& target, const FuzzConfig& config);

} // namespace fuzzdict
