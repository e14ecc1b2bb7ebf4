#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "trajcomp/bitio.hpp"
#include "trajcomp/types.hpp"

namespace trajcomp {

// Canonical Huffman code. Codes are assigned in (length, symbol id) order,
// so equal frequency tables produce identical tables everywhere. A table
// over a single distinct symbol uses a 1-bit code.
class HuffmanTable {
public:
    static HuffmanTable from_frequencies(const std::map<Symbol, std::uint64_t>& freqs);
    static HuffmanTable from_symbols(std::span<const Symbol> seq);

    const std::map<Symbol, std::uint8_t>& lengths() const { return lengths_; }
    std::uint32_t code_of(Symbol s) const;
    std::uint8_t length_of(Symbol s) const;

    void encode(std::span<const Symbol> seq, BitWriter& out) const;
    Symbol decode_one(BitReader& in) const;
    std::vector<Symbol> decode(BitReader& in, std::size_t count) const;

    // Serialized size and form: symbol count, then (symbol, length) pairs.
    void serialize(std::ostream& out) const;
    static HuffmanTable parse(std::istream& in);
    std::size_t serialized_bytes() const;

    bool operator==(const HuffmanTable& other) const { return lengths_ == other.lengths_; }

private:
    void build_codes();

    std::map<Symbol, std::uint8_t> lengths_;
    std::map<Symbol, std::uint32_t> codes_;
    // Canonical decode tables indexed by code length.
    std::vector<std::uint32_t> first_code_;
    std::vector<std::uint32_t> first_index_;
    std::vector<Symbol> symbols_by_code_;
};

struct HuffmanEncoded {
    HuffmanTable table;
    std::vector<std::uint8_t> bytes;
    std::size_t bit_count = 0;
};

// Build a table from the sequence's own frequencies and encode it.
HuffmanEncoded huffman_encode(std::span<const Symbol> seq);

// Inverse of huffman_encode; rejects streams with dangling bits.
std::vector<Symbol> huffman_decode(const HuffmanTable& table,
                                   std::span<const std::uint8_t> bytes, std::size_t bit_count);

// Uncompressed over compressed size.
double compression_ratio(double raw_bytes, double compressed_bytes);

} // namespace trajcomp
