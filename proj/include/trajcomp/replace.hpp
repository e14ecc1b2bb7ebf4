#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "trajcomp/pst.hpp"
#include "trajcomp/types.hpp"

namespace trajcomp {

// Shannon entropy of a symbol sequence, bits per symbol.
double shannon_entropy(std::span<const Symbol> seq);

// Positions where the shared predictor's argmax over the preceding
// restored context equals the item. DELIM tokens and verbatim-run
// interiors are opaque: never predictable, and they reset the context.
std::vector<std::size_t> predictable_items(std::span<const Symbol> seq,
                                           const Predictor& predictor,
                                           const Alphabet& alphabet);

// Per-symbol counts driving the replacement rules: total items n_sigma,
// predictable items m_sigma, and the running hit-symbol count.
class SymbolStats {
public:
    static SymbolStats build(std::span<const Symbol> seq, std::span<const std::size_t> predictable,
                             const Alphabet& alphabet);
    static SymbolStats build_multi(const std::vector<std::vector<Symbol>>& segments,
                                   const std::vector<std::vector<std::size_t>>& predictable,
                                   const Alphabet& alphabet);

    std::uint64_t total(Symbol s) const;
    std::uint64_t predictable(Symbol s) const;
    std::uint64_t hit_count() const { return hit_count_; }
    std::uint64_t length() const { return length_; }
    const std::map<Symbol, std::uint64_t>& totals() const { return totals_; }
    const std::map<Symbol, std::uint64_t>& predictables() const { return predictables_; }

    double entropy() const;

    // Move all predictable items of `s` to the hit symbol.
    void apply_full_replacement(Symbol s);

private:
    std::map<Symbol, std::uint64_t> totals_;
    std::map<Symbol, std::uint64_t> predictables_;
    std::uint64_t hit_count_ = 0;
    std::uint64_t length_ = 0;
};

// Exact entropy change, in bits per symbol, of moving moves[s] predictable
// items of each symbol s to the hit symbol. Computed from counts alone.
double entropy_delta(const SymbolStats& stats, const std::map<Symbol, std::uint64_t>& moves);

// Accumulation rule: symbols whose items are all predictable.
std::vector<Symbol> rule_accumulation(const SymbolStats& stats);

// Concentration rule: first symbol (descending m, ties by id) whose full
// replacement strictly lowers the entropy, per the two-mass skew test
// |(n-m)-(hit+m)| > |n-hit|.
std::optional<Symbol> rule_concentration(const SymbolStats& stats);

// Multiple-symbol rule: first combination whose joint full replacement
// strictly lowers the entropy, searching cardinality 2..cap and, within a
// cardinality, by descending joint predictable count (ties lexicographic).
std::vector<Symbol> rule_multiple(const SymbolStats& stats, int max_cardinality);

struct ReplaceOptions {
    int multi_cap = 5;
};

struct IntermediateSequence {
    std::vector<Symbol> items;
    std::vector<std::size_t> replaced_positions;
    std::vector<double> entropy_trace; // entropy after each rule application
};

struct SegmentedReplaceResult {
    std::vector<std::vector<Symbol>> segments;
    std::vector<double> entropy_trace;
    std::uint64_t replaced_count = 0;
    std::uint64_t predictable_count = 0;
};

// The Replace algorithm: accumulation once, then concentration and the
// multiple-symbol rule (preferring concentration) until neither applies.
IntermediateSequence replace(std::span<const Symbol> seq, const Predictor& predictor,
                             const Alphabet& alphabet, const ReplaceOptions& opts = {});

// Same, over several token streams treated as one sequence for statistics;
// predictability contexts reset at each segment start.
SegmentedReplaceResult replace_segments(const std::vector<std::vector<Symbol>>& segments,
                                        const Predictor& predictor, const Alphabet& alphabet,
                                        const ReplaceOptions& opts = {});

// Left-to-right inverse: every hit symbol is resolved to the predictor's
// argmax over the already-restored context.
std::vector<Symbol> restore(std::span<const Symbol> items, const Predictor& predictor,
                            const Alphabet& alphabet);
std::vector<std::vector<Symbol>> restore_segments(const std::vector<std::vector<Symbol>>& segments,
                                                  const Predictor& predictor,
                                                  const Alphabet& alphabet);

// Exhaustive minimum over replacement counts (0..m per predictable
// symbol); entropy depends on counts only, so counts are enumerated
// instead of sequences. Desk-scale oracle.
double hir_bruteforce(std::span<const Symbol> seq, const Predictor& predictor,
                      const Alphabet& alphabet, std::uint64_t max_states = 4'000'000);

} // namespace trajcomp
