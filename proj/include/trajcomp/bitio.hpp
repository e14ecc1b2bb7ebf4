#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace trajcomp {

// Bit stream helpers, most-significant-bit first within each byte.
class BitWriter {
public:
    void put_bit(unsigned bit) {
        if (bit_pos_ == 0) bytes_.push_back(0);
        if (bit) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - bit_pos_));
        bit_pos_ = (bit_pos_ + 1) % 8;
        ++bit_count_;
    }

    void put_bits(std::uint64_t value, int nbits) {
        if (nbits < 0 || nbits > 64) throw std::domain_error("bitio: bad width");
        for (int i = nbits - 1; i >= 0; --i) put_bit(static_cast<unsigned>((value >> i) & 1u));
    }

    std::size_t bit_count() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    unsigned bit_pos_ = 0;
    std::size_t bit_count_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_count)
        : bytes_(bytes), bit_count_(bit_count) {
        if (bit_count > bytes.size() * 8) throw std::runtime_error("bitio: bit count too large");
    }

    unsigned get_bit() {
        if (pos_ >= bit_count_) throw std::runtime_error("bitio: read past end of stream");
        const unsigned bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
        ++pos_;
        return bit;
    }

    std::uint64_t get_bits(int nbits) {
        std::uint64_t v = 0;
        for (int i = 0; i < nbits; ++i) v = (v << 1) | get_bit();
        return v;
    }

    std::size_t remaining() const { return bit_count_ - pos_; }
    std::size_t position() const { return pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t bit_count_;
    std::size_t pos_ = 0;
};

} // namespace trajcomp
