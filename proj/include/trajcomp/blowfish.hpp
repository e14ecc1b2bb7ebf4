#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trajcomp {

extern const std::array<std::uint32_t, 18> kBlowfishP;
extern const std::array<std::array<std::uint32_t, 256>, 4> kBlowfishS;

// Blowfish block cipher: 16-round Feistel network over 64-bit blocks,
// variable key length 32..448 bits. Decryption runs the subkeys in
// reverse order. The schedule is immutable once built.
class Blowfish {
public:
    explicit Blowfish(std::span<const std::uint8_t> key);

    std::uint64_t encrypt_block(std::uint64_t x) const;
    std::uint64_t decrypt_block(std::uint64_t y) const;

    // ECB over the byte string with a 4-byte big-endian length prefix and
    // zero padding up to a whole number of blocks.
    std::vector<std::uint8_t> encrypt_bytes(std::span<const std::uint8_t> data) const;
    std::vector<std::uint8_t> decrypt_bytes(std::span<const std::uint8_t> data) const;

private:
    std::uint32_t feistel(std::uint32_t x) const;
    void encrypt_halves(std::uint32_t& xl, std::uint32_t& xr) const;

    std::array<std::uint32_t, 18> p_;
    std::array<std::array<std::uint32_t, 256>, 4> s_;
};

std::vector<std::uint8_t> parse_hex_key(const std::string& hex);

} // namespace trajcomp
