#include "fuzzdict/harness.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace fuzzdict {

namespace {

uint32_t read_u32le(std::string_view input, uint32_t offset) {
    uint32_t v;
    std::memcpy(&v, input.data() + offset, 4);
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    v = __builtin_bswap32(v);
#endif
    return v;
}

bool satisfied(const Constraint& c, std::string_view input) {
    if (const auto* be = std::get_if<BytesEqual>(&c)) {
        if (be->offset + be->bytes.size() > input.size()) return false;
        return input.compare(be->offset, be->bytes.size(), be->bytes) == 0;
    }
    if (const auto* r = std::get_if<U32InRange>(&c)) {
        if (r->offset + 4 > input.size()) return false;
        uint32_t v = read_u32le(input, r->offset);
        return v > r->lo && v < r->hi;
    }
    const auto& p = std::get<U32ProductEq>(c);
    if (p.offset_a + 4 > input.size() || p.offset_b + 4 > input.size()) return false;
    uint64_t lhs = static_cast<uint64_t>(read_u32le(input, p.offset_a)) *
                   static_cast<uint64_t>(read_u32le(input, p.offset_b));
    uint64_t rhs = static_cast<uint64_t>(p.const_a) * static_cast<uint64_t>(p.const_b);
    return lhs == rhs;
}

// AFL's interesting constants, stored by write width.
const int64_t kInteresting8[] = {-128, -1, 0, 1, 16, 32, 64, 100, 127};
const int64_t kInteresting16[] = {-32768, -129, 128, 255, 256, 512, 1000, 1024, 4096, 32767};
const int64_t kInteresting32[] = {INT64_C(-2147483648), -100663046, -32769, 32768,
                                  65535, 65536, 100663045, 2147483647};

} // namespace

size_t constraint_count(const SyntheticTarget& target) {
    size_t n = 0;
    for (const auto& chain : target.chains) n += chain.constraints.size();
    return n;
}

bool evaluate_target(const SyntheticTarget& target, std::string_view input,
                     std::vector<uint32_t>& covered) {
    if (input.size() != target.input_size)
        throw std::invalid_argument("input length does not match target input size");
    bool all_flags = !target.chains.empty();
    uint32_t id = 0;
    for (const auto& chain : target.chains) {
        bool alive = true;
        for (const auto& c : chain.constraints) {
            if (!alive) {
                id += 1;
                continue;
            }
            if (satisfied(c, input)) {
                covered.push_back(id);
            } else {
                alive = false;
            }
            id += 1;
        }
        if (!alive) all_flags = false;
    }
    return all_flags;
}

SyntheticTarget listing1_target() {
    // Two base constant sets; the middle chains reuse them by parity of the
    // chain index. lo/hi bounds are exclusive and bracket the product pair.
    struct Consts {
        uint32_t lo_a, hi_a, lo_b, hi_b, ca, cb;
    };
    constexpr Consts base0{0x003e9ef4, 0x00649689, 0x00b10797, 0x00f2deeb,
                           0x00621a27, 0x00c01752};
    constexpr Consts base7{0x073f66a5, 0x07f04124, 0x07414558, 0x078e3e98,
                           0x074fd355, 0x075e1841};
    SyntheticTarget t;
    t.name = "listing1";
    t.input_size = 64;
    for (uint32_t c = 0; c < 8; ++c) {
        const Consts& k = (c % 2 == 0) ? base0 : base7;
        uint32_t off_a = 8 * c, off_b = 8 * c + 4;
        FlagChain chain;
        chain.constraints.push_back(U32InRange{off_a, k.lo_a, k.hi_a});
        chain.constraints.push_back(U32InRange{off_b, k.lo_b, k.hi_b});
        chain.constraints.push_back(U32ProductEq{off_a, off_b, k.ca, k.cb});
        t.chains.push_back(std::move(chain));
    }
    return t;
}

// Dictionary overwrites dominate by default: the harness exists to measure
// dictionary benefit, and magic-value targets are cracked by token placement,
// not bit noise. Without a dictionary the two dict operators drop out and the
// remaining weights still give a sane random mutator.
std::map<Mutator, uint32_t> default_mutation_weights() {
    return {{Mutator::BitFlip, 1},
            {Mutator::RandomByte, 1},
            {Mutator::InterestingValue, 1},
            {Mutator::DictInsert, 1},
            {Mutator::DictOverwrite, 8}};
}

void validate(const FuzzConfig& config, uint32_t input_size) {
    if (config.budget == 0) throw std::invalid_argument("budget must be positive");
    if (config.max_stacked == 0) throw std::invalid_argument("max_stacked must be positive");
    if (input_size == 0) throw std::invalid_argument("input size must be positive");
    uint64_t total = 0;
    for (const auto& [op, w] : config.weights) total += w;
    if (total == 0) throw std::invalid_argument("all mutation weights are zero");
}

namespace {

struct MutationTable {
    Mutator ops[8];
    uint32_t cumulative[8];
    size_t count = 0;
    uint32_t total = 0;

    void add(Mutator m, uint32_t w) {
        if (w == 0) return;
        ops[count] = m;
        total += w;
        cumulative[count] = total;
        ++count;
    }

    Mutator pick(Rng& rng) const {
        uint32_t r = static_cast<uint32_t>(rng.below(total));
        for (size_t i = 0; i < count; ++i)
            if (r < cumulative[i]) return ops[i];
        return ops[count - 1];
    }
};

MutationTable build_table(const FuzzConfig& config, bool dict_usable) {
    MutationTable t;
    for (const auto& [op, w] : config.weights) {
        bool is_dict = op == Mutator::DictInsert || op == Mutator::DictOverwrite;
        if (is_dict && !dict_usable) continue; // skipped: another op is drawn
        t.add(op, w);
    }
    if (t.count == 0) {
        // Only dictionary operators had weight and none is usable; fall back
        // to a bit flip so mutation always changes something.
        t.add(Mutator::BitFlip, 1);
    }
    return t;
}

void write_le(std::string& buf, size_t offset, uint64_t value, size_t width) {
    for (size_t i = 0; i < width; ++i)
        buf[offset + i] = static_cast<char>((value >> (8 * i)) & 0xFF);
}

void apply_op(std::string& input, Rng& rng, Mutator op,
              const std::vector<const std::string*>& dict) {
    const size_t size = input.size();
    switch (op) {
    case Mutator::BitFlip: {
        uint64_t bit = rng.below(size * 8);
        input[bit >> 3] ^= static_cast<char>(1u << (bit & 7));
        break;
    }
    case Mutator::RandomByte:
        input[rng.below(size)] = static_cast<char>(rng.next() & 0xFF);
        break;
    case Mutator::InterestingValue: {
        size_t width_pick = rng.below(3);
        size_t width = width_pick == 0 ? 1 : width_pick == 1 ? 2 : 4;
        if (width > size) width = 1;
        int64_t v;
        if (width == 1) v = kInteresting8[rng.below(std::size(kInteresting8))];
        else if (width == 2) v = kInteresting16[rng.below(std::size(kInteresting16))];
        else v = kInteresting32[rng.below(std::size(kInteresting32))];
        size_t off = rng.below(size - width + 1);
        write_le(input, off, static_cast<uint64_t>(v), width);
        break;
    }
    case Mutator::DictInsert: {
        const std::string& tok = *dict[rng.below(dict.size())];
        size_t off = rng.below(size - tok.size() + 1);
        input.replace(off, tok.size(), tok);
        break;
    }
    case Mutator::DictOverwrite: {
        const std::string& tok = *dict[rng.below(dict.size())];
        size_t slots = (size - tok.size()) / 4 + 1; // 4-byte-aligned positions
        size_t off = 4 * rng.below(slots);
        input.replace(off, tok.size(), tok);
        break;
    }
    }
}

void mutate_in_place(std::string& input, Rng& rng, const FuzzConfig& config,
                     const std::vector<const std::string*>& usable_dict,
                     const MutationTable& table) {
    uint32_t n_ops = 1 + static_cast<uint32_t>(rng.below(config.max_stacked));
    for (uint32_t i = 0; i < n_ops; ++i)
        apply_op(input, rng, table.pick(rng), usable_dict);
}

std::vector<const std::string*> usable_tokens(const FuzzConfig& config, size_t input_size) {
    std::vector<const std::string*> out;
    for (const auto& tok : config.dictionary)
        if (!tok.empty() && tok.size() <= input_size) out.push_back(&tok);
    return out;
}

} // namespace

std::string mutate(std::string input, Rng& rng, const FuzzConfig& config) {
    validate(config, static_cast<uint32_t>(input.size()));
    auto dict = usable_tokens(config, input.size());
    MutationTable table = build_table(config, !dict.empty());
    mutate_in_place(input, rng, config, dict, table);
    return input;
}

CoverageReport run_campaign(const SyntheticTarget& target, const FuzzConfig& config) {
    validate(config, target.input_size);
    CoverageReport report;
    const size_t n_constraints = constraint_count(target);
    std::vector<uint8_t> covered(n_constraints, 0);

    auto dict = usable_tokens(config, target.input_size);
    MutationTable table = build_table(config, !dict.empty());

    std::vector<std::string> corpus{std::string(target.input_size, '\0')};
    Rng rng(config.seed);
    std::vector<uint32_t> hits;
    hits.reserve(n_constraints);
    // High-water mark of constraints satisfied by a single input. The crash
    // check is a short-circuit conjunction over all flags, so an input that
    // satisfies more constraints at once than any before it reaches deeper
    // into that chain; keeping it (libFuzzer-style fitness) is what lets the
    // corpus stack chains one by one instead of stalling once every
    // constraint has been seen somewhere.
    size_t best_simultaneous = 0;
    // Index of the member kept only for its simultaneous-satisfaction record.
    // A new record replaces it instead of growing the corpus, so round-robin
    // keeps feeding the deepest lineage; members kept for fresh constraint
    // coverage are never evicted.
    size_t record_slot = SIZE_MAX;

    for (uint64_t exec = 0; exec < config.budget; ++exec) {
        std::string cand = corpus[exec % corpus.size()];
        mutate_in_place(cand, rng, config, dict, table);
        hits.clear();
        bool crash = evaluate_target(target, cand, hits);
        bool fresh = false;
        for (uint32_t id : hits) {
            if (!covered[id]) {
                covered[id] = 1;
                report.first_cover_exec[id] = exec;
                fresh = true;
            }
        }
        bool record = hits.size() > best_simultaneous;
        // A tie refreshes the record slot too: neutral drift lets a record
        // whose range checks were satisfied by chance values swap them for
        // dictionary tokens one at a time, which a strict ratchet cannot do.
        bool tie = !hits.empty() && hits.size() == best_simultaneous;
        if (record) best_simultaneous = hits.size();
        if (fresh) {
            corpus.push_back(std::move(cand));
            if (record) record_slot = SIZE_MAX; // record holder is coverage-kept
        } else if (record) {
            if (record_slot == SIZE_MAX) {
                record_slot = corpus.size();
                corpus.push_back(std::move(cand));
            } else {
                corpus[record_slot] = std::move(cand);
            }
        } else if (tie && record_slot != SIZE_MAX) {
            corpus[record_slot] = std::move(cand);
        }
        report.total_execs = exec + 1;
        if (crash) {
            report.crash_found = true;
            report.crash_exec = exec;
            break;
        }
    }
    for (uint32_t id = 0; id < n_constraints; ++id)
        if (covered[id]) report.covered.insert(id);
    return report;
}

} // namespace fuzzdict
