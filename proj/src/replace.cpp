#include "trajcomp/replace.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace trajcomp {
namespace {

double xlog2x(double x) { return x <= 0.0 ? 0.0 : x * std::log2(x); }

// Entropy contribution -n/N * log2(n/N) summed from counts. Counts are
// summed in sorted order so permuting symbol identities gives bit-equal
// results.
double entropy_from_counts(const std::map<Symbol, std::uint64_t>& counts, std::uint64_t hit,
                           std::uint64_t length) {
    std::vector<std::uint64_t> values;
    values.reserve(counts.size() + 1);
    for (const auto& [s, c] : counts)
        if (c > 0) values.push_back(c);
    if (hit > 0) values.push_back(hit);
    std::sort(values.begin(), values.end());
    double h = 0.0;
    const double n = static_cast<double>(length);
    for (std::uint64_t c : values) h -= xlog2x(static_cast<double>(c) / n);
    return h;
}

// Shared scanner for predictability and restoration. Walks the token
// stream maintaining the prediction context; DELIM flips verbatim mode and
// clears the context, verbatim interiors never touch it.
template <typename OnPlain>
void scan_tokens(std::span<const Symbol> seq, const Alphabet& alphabet, OnPlain&& on_plain) {
    std::vector<Symbol> ctx;
    bool verbatim = false;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const Symbol tok = seq[i];
        if (alphabet.is_delim(tok)) {
            verbatim = !verbatim;
            ctx.clear();
            continue;
        }
        if (verbatim) continue;
        const Symbol resolved = on_plain(i, tok, std::span<const Symbol>(ctx));
        ctx.push_back(resolved);
    }
}

} // namespace

double shannon_entropy(std::span<const Symbol> seq) {
    if (seq.empty()) throw std::domain_error("entropy: empty sequence");
    std::map<Symbol, std::uint64_t> counts;
    for (Symbol s : seq) counts[s] += 1;
    return entropy_from_counts(counts, 0, seq.size());
}

std::vector<std::size_t> predictable_items(std::span<const Symbol> seq,
                                           const Predictor& predictor,
                                           const Alphabet& alphabet) {
    std::vector<std::size_t> positions;
    scan_tokens(seq, alphabet,
                [&](std::size_t i, Symbol tok, std::span<const Symbol> ctx) {
                    if (alphabet.is_location(tok) && predictor.predict_next(ctx) == tok)
                        positions.push_back(i);
                    return tok;
                });
    return positions;
}

SymbolStats SymbolStats::build(std::span<const Symbol> seq,
                               std::span<const std::size_t> predictable,
                               const Alphabet& alphabet) {
    SymbolStats stats;
    for (Symbol s : seq) {
        if (alphabet.is_hit(s)) throw std::domain_error("stats: hit symbol already present");
        stats.totals_[s] += 1;
        stats.length_ += 1;
    }
    for (std::size_t pos : predictable) {
        if (pos >= seq.size()) throw std::domain_error("stats: predictable position out of range");
        stats.predictables_[seq[pos]] += 1;
    }
    for (const auto& [s, m] : stats.predictables_)
        if (m > stats.totals_[s]) throw std::domain_error("stats: m exceeds n");
    return stats;
}

SymbolStats SymbolStats::build_multi(const std::vector<std::vector<Symbol>>& segments,
                                     const std::vector<std::vector<std::size_t>>& predictable,
                                     const Alphabet& alphabet) {
    if (segments.size() != predictable.size())
        throw std::domain_error("stats: segment/predictable size mismatch");
    SymbolStats stats;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const SymbolStats part = build(segments[k], predictable[k], alphabet);
        for (const auto& [s, c] : part.totals_) stats.totals_[s] += c;
        for (const auto& [s, c] : part.predictables_) stats.predictables_[s] += c;
        stats.length_ += part.length_;
    }
    return stats;
}

std::uint64_t SymbolStats::total(Symbol s) const {
    const auto it = totals_.find(s);
    return it == totals_.end() ? 0 : it->second;
}

std::uint64_t SymbolStats::predictable(Symbol s) const {
    const auto it = predictables_.find(s);
    return it == predictables_.end() ? 0 : it->second;
}

double SymbolStats::entropy() const {
    if (length_ == 0) throw std::domain_error("stats: empty");
    return entropy_from_counts(totals_, hit_count_, length_);
}

void SymbolStats::apply_full_replacement(Symbol s) {
    const std::uint64_t m = predictable(s);
    if (m == 0) return;
    totals_[s] -= m;
    if (totals_[s] == 0) totals_.erase(s);
    predictables_.erase(s);
    hit_count_ += m;
}

double entropy_delta(const SymbolStats& stats, const std::map<Symbol, std::uint64_t>& moves) {
    const double n = static_cast<double>(stats.length());
    std::uint64_t moved = 0;
    double delta = 0.0;
    for (const auto& [s, k] : moves) {
        if (k > stats.predictable(s))
            throw std::domain_error("entropy_delta: moving more items than predictable");
        if (k == 0) continue;
        const std::uint64_t before = stats.total(s);
        delta += xlog2x(static_cast<double>(before) / n) -
                 xlog2x(static_cast<double>(before - k) / n);
        moved += k;
    }
    if (moved == 0) return 0.0;
    delta += xlog2x(static_cast<double>(stats.hit_count()) / n) -
             xlog2x(static_cast<double>(stats.hit_count() + moved) / n);
    return delta;
}

std::vector<Symbol> rule_accumulation(const SymbolStats& stats) {
    std::vector<Symbol> out;
    for (const auto& [s, m] : stats.predictables())
        if (m > 0 && m == stats.total(s)) out.push_back(s);
    return out;
}

std::optional<Symbol> rule_concentration(const SymbolStats& stats) {
    std::vector<std::pair<Symbol, std::uint64_t>> candidates(stats.predictables().begin(),
                                                             stats.predictables().end());
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [s, m] : candidates) {
        if (m == 0) continue;
        const auto n = static_cast<long long>(stats.total(s));
        const auto hit = static_cast<long long>(stats.hit_count());
        const auto k = static_cast<long long>(m);
        if (std::abs((n - k) - (hit + k)) > std::abs(n - hit)) return s;
    }
    return std::nullopt;
}

std::vector<Symbol> rule_multiple(const SymbolStats& stats, int max_cardinality) {
    std::vector<Symbol> symbols;
    for (const auto& [s, m] : stats.predictables())
        if (m > 0) symbols.push_back(s);

    const int limit = std::min<int>(max_cardinality, static_cast<int>(symbols.size()));
    for (int card = 2; card <= limit; ++card) {
        // All combinations of `card` symbols, tried by descending joint
        // predictable count (bigger moves skew harder), ties lexicographic.
        struct Combo {
            std::uint64_t joint;
            std::vector<int> idx;
        };
        std::vector<Combo> combos;
        std::vector<int> idx(card);
        for (int i = 0; i < card; ++i) idx[i] = i;
        while (true) {
            std::uint64_t joint = 0;
            for (int i : idx) joint += stats.predictable(symbols[i]);
            combos.push_back(Combo{joint, idx});
            int pos = card - 1;
            while (pos >= 0 && idx[pos] == static_cast<int>(symbols.size()) - card + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < card; ++i) idx[i] = idx[i - 1] + 1;
        }
        std::stable_sort(combos.begin(), combos.end(),
                         [](const Combo& a, const Combo& b) { return a.joint > b.joint; });
        for (const auto& combo : combos) {
            std::map<Symbol, std::uint64_t> moves;
            for (int i : combo.idx) moves[symbols[i]] = stats.predictable(symbols[i]);
            if (entropy_delta(stats, moves) < 0.0) {
                std::vector<Symbol> out;
                for (int i : combo.idx) out.push_back(symbols[i]);
                return out;
            }
        }
    }
    return {};
}

namespace {

struct ReplacePlan {
    std::vector<Symbol> replaced_symbols;
    std::vector<double> entropy_trace;
};

// Rule iteration on the statistics table; which symbols get fully
// replaced is independent of the sequence layout.
ReplacePlan plan_replacements(SymbolStats& stats, const ReplaceOptions& opts) {
    ReplacePlan plan;
    double running = stats.entropy();
    plan.entropy_trace.push_back(running);

    auto apply = [&](std::span<const Symbol> group, bool strict) {
        std::map<Symbol, std::uint64_t> moves;
        for (Symbol s : group) moves[s] = stats.predictable(s);
        const double delta = entropy_delta(stats, moves);
        assert(strict ? delta < 0.0 : delta <= 1e-12);
        (void)strict;
        for (Symbol s : group) {
            stats.apply_full_replacement(s);
            plan.replaced_symbols.push_back(s);
        }
        running += delta;
        plan.entropy_trace.push_back(running);
    };

    const std::vector<Symbol> full = rule_accumulation(stats);
    if (!full.empty()) apply(full, false);

    while (true) {
        if (const auto s = rule_concentration(stats)) {
            apply(std::vector<Symbol>{*s}, true);
            continue;
        }
        const std::vector<Symbol> multi = rule_multiple(stats, opts.multi_cap);
        if (multi.empty()) break;
        apply(multi, true);
    }
    return plan;
}

} // namespace

SegmentedReplaceResult replace_segments(const std::vector<std::vector<Symbol>>& segments,
                                        const Predictor& predictor, const Alphabet& alphabet,
                                        const ReplaceOptions& opts) {
    std::vector<std::vector<std::size_t>> predictable;
    predictable.reserve(segments.size());
    for (const auto& seg : segments)
        predictable.push_back(predictable_items(seg, predictor, alphabet));

    SymbolStats stats = SymbolStats::build_multi(segments, predictable, alphabet);

    SegmentedReplaceResult result;
    result.segments = segments;
    for (const auto& p : predictable) result.predictable_count += p.size();
    if (stats.length() == 0) return result;

    ReplacePlan plan = plan_replacements(stats, opts);
    result.entropy_trace = std::move(plan.entropy_trace);

    std::set<Symbol> chosen(plan.replaced_symbols.begin(), plan.replaced_symbols.end());
    for (std::size_t k = 0; k < segments.size(); ++k)
        for (std::size_t pos : predictable[k])
            if (chosen.count(segments[k][pos])) {
                result.segments[k][pos] = alphabet.hit();
                result.replaced_count += 1;
            }
    return result;
}

IntermediateSequence replace(std::span<const Symbol> seq, const Predictor& predictor,
                             const Alphabet& alphabet, const ReplaceOptions& opts) {
    SegmentedReplaceResult multi = replace_segments(
        {std::vector<Symbol>(seq.begin(), seq.end())}, predictor, alphabet, opts);
    IntermediateSequence out;
    out.items = std::move(multi.segments.front());
    out.entropy_trace = std::move(multi.entropy_trace);
    for (std::size_t i = 0; i < out.items.size(); ++i)
        if (alphabet.is_hit(out.items[i])) out.replaced_positions.push_back(i);
    return out;
}

std::vector<Symbol> restore(std::span<const Symbol> items, const Predictor& predictor,
                            const Alphabet& alphabet) {
    std::vector<Symbol> out(items.begin(), items.end());
    scan_tokens(items, alphabet, [&](std::size_t i, Symbol tok, std::span<const Symbol> ctx) {
        if (!alphabet.is_hit(tok)) return tok;
        const Symbol value = predictor.predict_next(ctx);
        out[i] = value;
        return value;
    });
    for (Symbol s : out)
        if (alphabet.is_hit(s)) throw std::runtime_error("restore: hit symbol in opaque region");
    return out;
}

std::vector<std::vector<Symbol>> restore_segments(const std::vector<std::vector<Symbol>>& segments,
                                                  const Predictor& predictor,
                                                  const Alphabet& alphabet) {
    std::vector<std::vector<Symbol>> out;
    out.reserve(segments.size());
    for (const auto& seg : segments) out.push_back(restore(seg, predictor, alphabet));
    return out;
}

double hir_bruteforce(std::span<const Symbol> seq, const Predictor& predictor,
                      const Alphabet& alphabet, std::uint64_t max_states) {
    const auto predictable = predictable_items(seq, predictor, alphabet);
    SymbolStats stats = SymbolStats::build(seq, predictable, alphabet);

    std::vector<std::pair<Symbol, std::uint64_t>> ms(stats.predictables().begin(),
                                                     stats.predictables().end());
    std::uint64_t states = 1;
    for (const auto& [s, m] : ms) {
        states *= m + 1;
        if (states > max_states)
            throw std::length_error("hir_bruteforce: instance too large");
    }

    double best = stats.entropy();
    std::vector<std::uint64_t> k(ms.size(), 0);
    while (true) {
        // Advance the mixed-radix counter over replacement counts.
        std::size_t pos = 0;
        while (pos < k.size() && k[pos] == ms[pos].second) {
            k[pos] = 0;
            ++pos;
        }
        if (pos == k.size()) break;
        k[pos] += 1;

        std::map<Symbol, std::uint64_t> moves;
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] > 0) moves[ms[i].first] = k[i];
        best = std::min(best, stats.entropy() + entropy_delta(stats, moves));
    }
    return best;
}

} // namespace trajcomp
