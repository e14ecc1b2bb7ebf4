#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trajcomp/huffman.hpp"
#include "trajcomp/pst.hpp"
#include "trajcomp/scenario.hpp"
#include "trajcomp/segment.hpp"
#include "trajcomp/types.hpp"

namespace trajcomp {

// Per-segment field widths (bits) and the fixed packet header size.
struct PacketConfig {
    int timestamp_bits = 8; // a
    int location_bits = 8;  // b, fixed-width raw location items
    int id_bits = 8;        // c
    int length_bits = 8;    // l
    static constexpr std::size_t header_bytes = 4;
};

// One segment ready for packaging: merged (group) or plain (solo) token
// stream after the entropy-reduction pass.
struct ProcessedSegment {
    SegmentKind kind = SegmentKind::Solo;
    Timestamp begin = 0;
    std::uint32_t length = 0;    // tracking intervals covered
    std::uint32_t id = 0;        // object id (solo) or group id (group)
    std::uint32_t group_size = 1;
    std::vector<Symbol> tokens;
};

// Batched update packet, bit-exact layout:
//   [header: 4 bytes][segment count: 8 bits]
//   per segment: [kind: 1 bit][timestamp: a][length: l][id: c][coded body]
// The body is Huffman-coded with the packet's shared table; it ends after
// `length` columns worth of tokens, so no explicit token count is stored.
std::vector<std::uint8_t> pack_batch(const std::vector<ProcessedSegment>& segments,
                                     const HuffmanTable& table, const PacketConfig& config);

// Field-level inverse of pack_batch. `group_sizes` maps group id to member
// count, needed to track verbatim runs while decoding group bodies.
std::vector<ProcessedSegment> unpack_segments(std::span<const std::uint8_t> packet,
                                              const HuffmanTable& table,
                                              const PacketConfig& config,
                                              const std::map<std::uint32_t, std::uint32_t>& group_sizes,
                                              const Alphabet& alphabet);

// Online update accounting: one packet per object per interval, suppressed
// when the shared predictor already names the reported location.
struct OnlineVolume {
    std::uint64_t bytes = 0;
    std::uint64_t sent = 0;
    std::uint64_t total = 0;

    double hit_rate() const {
        return total == 0 ? 0.0 : 1.0 - static_cast<double>(sent) / static_cast<double>(total);
    }
};

OnlineVolume online_volume(const std::vector<LocationSequence>& seqs, const Predictor* predictor,
                           bool hit_suppression, const PacketConfig& config);

} // namespace trajcomp
