#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "trajcomp/types.hpp"

namespace trajcomp {

// Next-symbol predictor shared by the compressing and the restoring side.
// Implementations must be deterministic: equal contexts give equal answers.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual Symbol predict_next(std::span<const Symbol> context) const = 0;
};

struct PstParams {
    double p_min = 0.02;  // minimum empirical pattern probability
    int l_max = 5;        // maximum context depth
    double gamma = 0.001; // smoothing floor per alphabet symbol
};

// Variable-order Markov predictor over location symbols. Stored contexts
// are the significant movement patterns: suffix-closed, each with empirical
// probability >= p_min in the training data. Prediction distributions are
// smoothed so every alphabet symbol keeps probability >= gamma.
class PatternTree : public Predictor {
public:
    struct Node {
        std::map<Symbol, std::uint64_t> next_counts;
        std::uint64_t next_total = 0;
        std::uint64_t occurrences = 0;
        double significance = 0.0; // empirical probability of the context
    };

    using Context = std::vector<Symbol>;

    // Trivial single-symbol model; placeholder until learn() or parse().
    PatternTree() : PatternTree(1, PstParams{}) { nodes_[Context{}] = Node{}; }

    static PatternTree learn(const std::vector<std::vector<Symbol>>& training,
                             std::uint32_t alphabet_size, const PstParams& params);
    static PatternTree learn(const std::vector<Symbol>& sequence, std::uint32_t alphabet_size,
                             const PstParams& params);

    // Smoothed probability of `next` under the longest stored suffix of
    // `context`.
    double predict(std::span<const Symbol> context, Symbol next) const;

    // Argmax of predict over the alphabet; ties break toward the smallest
    // symbol id.
    Symbol predict_next(std::span<const Symbol> context) const override;

    std::uint32_t alphabet_size() const { return alphabet_size_; }
    const PstParams& params() const { return params_; }
    const std::map<Context, Node>& nodes() const { return nodes_; }
    bool has_context(const Context& c) const { return nodes_.count(c) > 0; }
    double significance(const Context& c) const;

    // Longest stored suffix of `context`, truncated to l_max symbols.
    const Node& lookup(std::span<const Symbol> context) const;

    // Flat text serialization; identical trees produce identical bytes, so
    // transmitter and receiver can verify they share one model.
    void serialize(std::ostream& out) const;
    static PatternTree parse(std::istream& in);
    std::uint64_t digest() const;

    bool operator==(const PatternTree& other) const {
        return alphabet_size_ == other.alphabet_size_ && equal_nodes(other);
    }

private:
    PatternTree(std::uint32_t alphabet_size, const PstParams& params)
        : alphabet_size_(alphabet_size), params_(params) {}

    bool equal_nodes(const PatternTree& other) const;
    double smoothed(const Node& node, Symbol next) const;

    std::uint32_t alphabet_size_;
    PstParams params_;
    std::map<Context, Node> nodes_;
};

// Stable 64-bit FNV-1a, used for model digests.
std::uint64_t fnv1a64(std::span<const char> bytes);

} // namespace trajcomp
