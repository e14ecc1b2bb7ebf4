#pragma once

#include <cstdint>
#include <stdexcept>

namespace trajcomp {

using Symbol = std::uint16_t;
using ObjectId = std::uint32_t;
using Timestamp = std::uint32_t;

// Location symbols live in [0, locations). Two reserved tokens sit just
// above the location range: DELIM brackets verbatim runs in a merged
// sequence, HIT marks items replaced by the entropy-reduction stage.
class Alphabet {
public:
    explicit Alphabet(std::uint32_t locations) : locations_(locations) {
        if (locations == 0 || locations > 0xfffe - 1)
            throw std::domain_error("alphabet: location count out of range");
    }

    std::uint32_t locations() const { return locations_; }
    Symbol delim() const { return static_cast<Symbol>(locations_); }
    Symbol hit() const { return static_cast<Symbol>(locations_ + 1); }

    bool is_location(Symbol s) const { return s < locations_; }
    bool is_delim(Symbol s) const { return s == delim(); }
    bool is_hit(Symbol s) const { return s == hit(); }

    // Total distinct token values (locations + DELIM + HIT).
    std::uint32_t token_space() const { return locations_ + 2; }

    bool operator==(const Alphabet&) const = default;

private:
    std::uint32_t locations_;
};

} // namespace trajcomp
