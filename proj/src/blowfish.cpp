#include "trajcomp/blowfish.hpp"

#include <stdexcept>

namespace trajcomp {

Blowfish::Blowfish(std::span<const std::uint8_t> key) : p_(kBlowfishP), s_(kBlowfishS) {
    if (key.size() < 4 || key.size() > 56)
        throw std::domain_error("blowfish: key must be 32..448 bits");

    std::size_t j = 0;
    for (auto& p : p_) {
        std::uint32_t data = 0;
        for (int k = 0; k < 4; ++k) {
            data = (data << 8) | key[j];
            j = (j + 1) % key.size();
        }
        p ^= data;
    }

    std::uint32_t xl = 0, xr = 0;
    for (std::size_t i = 0; i < p_.size(); i += 2) {
        encrypt_halves(xl, xr);
        p_[i] = xl;
        p_[i + 1] = xr;
    }
    for (auto& box : s_) {
        for (std::size_t i = 0; i < box.size(); i += 2) {
            encrypt_halves(xl, xr);
            box[i] = xl;
            box[i + 1] = xr;
        }
    }
}

std::uint32_t Blowfish::feistel(std::uint32_t x) const {
    const std::uint32_t a = x >> 24;
    const std::uint32_t b = (x >> 16) & 0xff;
    const std::uint32_t c = (x >> 8) & 0xff;
    const std::uint32_t d = x & 0xff;
    return ((s_[0][a] + s_[1][b]) ^ s_[2][c]) + s_[3][d];
}

void Blowfish::encrypt_halves(std::uint32_t& xl, std::uint32_t& xr) const {
    for (int i = 0; i < 16; ++i) {
        xl ^= p_[i];
        xr ^= feistel(xl);
        std::swap(xl, xr);
    }
    std::swap(xl, xr);
    xr ^= p_[16];
    xl ^= p_[17];
}

std::uint64_t Blowfish::encrypt_block(std::uint64_t x) const {
    std::uint32_t xl = static_cast<std::uint32_t>(x >> 32);
    std::uint32_t xr = static_cast<std::uint32_t>(x);
    encrypt_halves(xl, xr);
    return (static_cast<std::uint64_t>(xl) << 32) | xr;
}

std::uint64_t Blowfish::decrypt_block(std::uint64_t y) const {
    std::uint32_t xl = static_cast<std::uint32_t>(y >> 32);
    std::uint32_t xr = static_cast<std::uint32_t>(y);
    for (int i = 17; i > 1; --i) {
        xl ^= p_[i];
        xr ^= feistel(xl);
        std::swap(xl, xr);
    }
    std::swap(xl, xr);
    xr ^= p_[1];
    xl ^= p_[0];
    return (static_cast<std::uint64_t>(xl) << 32) | xr;
}

std::vector<std::uint8_t> Blowfish::encrypt_bytes(std::span<const std::uint8_t> data) const {
    // 4-byte length prefix, zero padding to a block multiple.
    std::vector<std::uint8_t> plain;
    const std::uint32_t n = static_cast<std::uint32_t>(data.size());
    plain.push_back(static_cast<std::uint8_t>(n >> 24));
    plain.push_back(static_cast<std::uint8_t>(n >> 16));
    plain.push_back(static_cast<std::uint8_t>(n >> 8));
    plain.push_back(static_cast<std::uint8_t>(n));
    plain.insert(plain.end(), data.begin(), data.end());
    while (plain.size() % 8 != 0) plain.push_back(0);

    std::vector<std::uint8_t> out(plain.size());
    for (std::size_t i = 0; i < plain.size(); i += 8) {
        std::uint64_t block = 0;
        for (int k = 0; k < 8; ++k) block = (block << 8) | plain[i + k];
        const std::uint64_t enc = encrypt_block(block);
        for (int k = 0; k < 8; ++k) out[i + k] = static_cast<std::uint8_t>(enc >> (56 - 8 * k));
    }
    return out;
}

std::vector<std::uint8_t> Blowfish::decrypt_bytes(std::span<const std::uint8_t> data) const {
    if (data.size() % 8 != 0 || data.empty())
        throw std::runtime_error("blowfish: ciphertext not a block multiple");
    std::vector<std::uint8_t> plain(data.size());
    for (std::size_t i = 0; i < data.size(); i += 8) {
        std::uint64_t block = 0;
        for (int k = 0; k < 8; ++k) block = (block << 8) | data[i + k];
        const std::uint64_t dec = decrypt_block(block);
        for (int k = 0; k < 8; ++k) plain[i + k] = static_cast<std::uint8_t>(dec >> (56 - 8 * k));
    }
    const std::uint64_t n = (static_cast<std::uint32_t>(plain[0]) << 24) |
                            (plain[1] << 16) | (plain[2] << 8) | plain[3];
    if (n + 4 > plain.size()) throw std::runtime_error("blowfish: corrupt length prefix");
    return std::vector<std::uint8_t>(plain.begin() + 4, plain.begin() + 4 + n);
}

std::vector<std::uint8_t> parse_hex_key(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::domain_error("key: hex string must have even length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::domain_error("key: invalid hex digit");
    };
    std::vector<std::uint8_t> key;
    for (std::size_t i = 0; i < hex.size(); i += 2)
        key.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return key;
}

} // namespace trajcomp
