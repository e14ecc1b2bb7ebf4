#include "trajcomp/merge.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "trajcomp/bitio.hpp"

namespace trajcomp {

std::optional<Symbol> select_representative(const Column& column, int error_bound,
                                            const SensorGrid& grid) {
    if (column.symbols.empty()) throw std::domain_error("select: empty column");

    std::vector<Location> members;
    members.reserve(column.symbols.size());
    for (Symbol s : column.symbols) members.push_back(grid.location_of(s));

    // Integer total deviation keeps the minimum-mean comparison exact.
    long best_total = -1;
    Symbol best = 0;
    for (int node = 0; node < grid.node_count(); ++node) {
        const Location cand = grid.location_of(static_cast<Symbol>(node));
        long total = 0;
        bool ok = true;
        for (const Location& m : members) {
            const int d = hop_distance(grid, cand, m);
            if (d > error_bound) {
                ok = false;
                break;
            }
            total += d;
        }
        if (ok && (best_total < 0 || total < best_total)) {
            best_total = total;
            best = static_cast<Symbol>(node);
        }
    }
    if (best_total < 0) return std::nullopt;
    return best;
}

MergedSequence merge_group(const std::vector<Column>& columns, int error_bound,
                           const SensorGrid& grid) {
    if (error_bound < 0) throw std::domain_error("merge: error bound must be >= 0");
    const std::size_t n = columns.empty() ? 1 : columns.front().symbols.size();
    for (const auto& col : columns)
        if (col.symbols.size() != n)
            throw std::domain_error("merge: columns disagree on group size");
    if (n == 0) throw std::domain_error("merge: empty columns");

    const Alphabet alphabet = grid.alphabet();
    MergedSequence merged;
    merged.group_size = n;

    bool verbatim = false;
    for (const auto& col : columns) {
        const bool uniform =
            std::all_of(col.symbols.begin(), col.symbols.end(),
                        [&](Symbol s) { return s == col.symbols.front(); });
        std::optional<Symbol> rep;
        if (uniform)
            rep = col.symbols.front();
        else
            rep = select_representative(col, error_bound, grid);

        if (rep) {
            if (verbatim) {
                merged.tokens.push_back(alphabet.delim());
                verbatim = false;
            }
            merged.tokens.push_back(*rep);
        } else {
            if (!verbatim) {
                merged.tokens.push_back(alphabet.delim());
                verbatim = true;
            }
            merged.tokens.insert(merged.tokens.end(), col.symbols.begin(), col.symbols.end());
        }
    }
    if (verbatim) merged.tokens.push_back(alphabet.delim());
    return merged;
}

std::vector<Column> unmerge(const MergedSequence& merged, const Alphabet& alphabet) {
    const std::size_t n = merged.group_size;
    if (n == 0) throw std::domain_error("unmerge: group size must be >= 1");

    std::vector<Column> columns;
    std::vector<Symbol> run;
    bool verbatim = false;
    for (Symbol tok : merged.tokens) {
        if (alphabet.is_delim(tok)) {
            if (verbatim) {
                if (run.size() % n != 0)
                    throw std::runtime_error("unmerge: verbatim run length " +
                                             std::to_string(run.size()) +
                                             " not divisible by group size");
                for (std::size_t i = 0; i < run.size(); i += n)
                    columns.push_back(Column{columns.size(),
                                             {run.begin() + i, run.begin() + i + n}});
                run.clear();
            }
            verbatim = !verbatim;
            continue;
        }
        if (verbatim) {
            if (!alphabet.is_location(tok))
                throw std::runtime_error("unmerge: reserved token inside verbatim run");
            run.push_back(tok);
            continue;
        }
        if (!alphabet.is_location(tok))
            throw std::runtime_error("unmerge: unresolved reserved token");
        columns.push_back(Column{columns.size(), std::vector<Symbol>(n, tok)});
    }
    if (verbatim) throw std::runtime_error("unmerge: unpaired delimiter");
    return columns;
}

namespace {

void check_symbol_width(const Alphabet& alphabet, int symbol_bits) {
    if (symbol_bits < 1 || symbol_bits > 16)
        throw std::domain_error("merged stream: symbol width out of range");
    if (alphabet.token_space() > (1u << symbol_bits))
        throw std::domain_error("merged stream: " + std::to_string(symbol_bits) +
                                " bits cannot hold the token space");
}

} // namespace

std::vector<std::uint8_t> merged_to_bytes(const MergedSequence& merged, const Alphabet& alphabet,
                                          int symbol_bits) {
    check_symbol_width(alphabet, symbol_bits);
    BitWriter bits;
    for (Symbol tok : merged.tokens) {
        if (tok >= alphabet.token_space())
            throw std::domain_error("merged stream: token outside alphabet");
        bits.put_bits(tok, symbol_bits);
    }
    return bits.bytes();
}

MergedSequence merged_from_bytes(std::span<const std::uint8_t> bytes, std::size_t token_count,
                                 std::size_t group_size, const Alphabet& alphabet,
                                 int symbol_bits) {
    check_symbol_width(alphabet, symbol_bits);
    BitReader bits(bytes, bytes.size() * 8);
    MergedSequence merged;
    merged.group_size = group_size;
    for (std::size_t i = 0; i < token_count; ++i) {
        const Symbol tok = static_cast<Symbol>(bits.get_bits(symbol_bits));
        if (tok >= alphabet.token_space())
            throw std::runtime_error("merged stream: token outside alphabet");
        merged.tokens.push_back(tok);
    }
    return merged;
}

} // namespace trajcomp
