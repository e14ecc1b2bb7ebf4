#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trajcomp/grid.hpp"
#include "trajcomp/types.hpp"

namespace trajcomp {

// Time-aligned column of one group's locations, one symbol per member in
// ascending object-id order.
struct Column {
    std::size_t index = 0;
    std::vector<Symbol> symbols;

    bool operator==(const Column&) const = default;
};

// Vertically merged group sequence. A column whose members can be served
// by one symbol contributes that single symbol; runs of columns that can
// not are emitted verbatim (all member symbols, column-major) between a
// pair of DELIM tokens.
struct MergedSequence {
    std::size_t group_size = 1;
    std::vector<Symbol> tokens;

    bool operator==(const MergedSequence&) const = default;
};

// Location minimizing the mean hop deviation over the column's members,
// subject to every deviation being <= error_bound. Candidates are all grid
// nodes; ties break to the smallest symbol id. Empty result when no node
// qualifies.
std::optional<Symbol> select_representative(const Column& column, int error_bound,
                                            const SensorGrid& grid);

MergedSequence merge_group(const std::vector<Column>& columns, int error_bound,
                           const SensorGrid& grid);

std::vector<Column> unmerge(const MergedSequence& merged, const Alphabet& alphabet);

// Fixed-width serialization of the token stream: every token (locations,
// DELIM, HIT) as a symbol_bits-wide integer, most significant bit first.
// symbol_bits must cover the whole token space.
std::vector<std::uint8_t> merged_to_bytes(const MergedSequence& merged, const Alphabet& alphabet,
                                          int symbol_bits);
MergedSequence merged_from_bytes(std::span<const std::uint8_t> bytes, std::size_t token_count,
                                 std::size_t group_size, const Alphabet& alphabet,
                                 int symbol_bits);

} // namespace trajcomp
