#include "trajcomp/packet.hpp"

#include <stdexcept>
#include <string>

namespace trajcomp {
namespace {

constexpr std::array<std::uint8_t, 4> kHeader = {0x54, 0x43, 0x01, 0x00};

void check_field(std::uint64_t value, int bits, const char* name) {
    if (bits < 1 || bits > 32) throw std::domain_error("packet: bad field width");
    if (value >> bits)
        throw std::runtime_error(std::string("packet: ") + name + " overflows " +
                                 std::to_string(bits) + "-bit field");
}

} // namespace

std::vector<std::uint8_t> pack_batch(const std::vector<ProcessedSegment>& segments,
                                     const HuffmanTable& table, const PacketConfig& config) {
    if (segments.size() > 255) throw std::runtime_error("packet: more than 255 segments");

    BitWriter bits;
    bits.put_bits(segments.size(), 8);
    for (const auto& seg : segments) {
        check_field(seg.begin, config.timestamp_bits, "timestamp");
        check_field(seg.length, config.length_bits, "length");
        check_field(seg.id, config.id_bits, "id");
        bits.put_bit(seg.kind == SegmentKind::Group ? 1 : 0);
        bits.put_bits(seg.begin, config.timestamp_bits);
        bits.put_bits(seg.length, config.length_bits);
        bits.put_bits(seg.id, config.id_bits);
        table.encode(seg.tokens, bits);
    }

    std::vector<std::uint8_t> packet(kHeader.begin(), kHeader.end());
    packet.insert(packet.end(), bits.bytes().begin(), bits.bytes().end());
    return packet;
}

std::vector<ProcessedSegment> unpack_segments(std::span<const std::uint8_t> packet,
                                              const HuffmanTable& table,
                                              const PacketConfig& config,
                                              const std::map<std::uint32_t, std::uint32_t>& group_sizes,
                                              const Alphabet& alphabet) {
    if (packet.size() < PacketConfig::header_bytes)
        throw std::runtime_error("packet: truncated header");

    BitReader bits(packet.subspan(PacketConfig::header_bytes),
                   (packet.size() - PacketConfig::header_bytes) * 8);
    const std::uint64_t count = bits.get_bits(8);

    std::vector<ProcessedSegment> segments;
    for (std::uint64_t i = 0; i < count; ++i) {
        ProcessedSegment seg;
        seg.kind = bits.get_bit() ? SegmentKind::Group : SegmentKind::Solo;
        seg.begin = static_cast<Timestamp>(bits.get_bits(config.timestamp_bits));
        seg.length = static_cast<std::uint32_t>(bits.get_bits(config.length_bits));
        seg.id = static_cast<std::uint32_t>(bits.get_bits(config.id_bits));
        seg.group_size = 1;
        if (seg.kind == SegmentKind::Group) {
            const auto it = group_sizes.find(seg.id);
            if (it == group_sizes.end())
                throw std::runtime_error("packet: unknown group id " + std::to_string(seg.id));
            seg.group_size = it->second;
        }

        // Decode tokens until the segment covers `length` columns.
        std::uint32_t columns = 0;
        std::uint32_t pending = 0;
        bool verbatim = false;
        while (columns < seg.length) {
            const Symbol tok = table.decode_one(bits);
            seg.tokens.push_back(tok);
            if (alphabet.is_delim(tok)) {
                if (seg.kind == SegmentKind::Solo)
                    throw std::runtime_error("packet: delimiter in solo segment");
                if (verbatim && pending != 0)
                    throw std::runtime_error("packet: verbatim run cut mid-column");
                verbatim = !verbatim;
            } else if (verbatim) {
                if (++pending == seg.group_size) {
                    pending = 0;
                    ++columns;
                }
            } else {
                ++columns;
            }
        }
        if (verbatim) {
            // A run may close exactly at the column quota.
            const Symbol tok = table.decode_one(bits);
            if (!alphabet.is_delim(tok) || pending != 0)
                throw std::runtime_error("packet: unterminated verbatim run");
            seg.tokens.push_back(tok);
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

OnlineVolume online_volume(const std::vector<LocationSequence>& seqs, const Predictor* predictor,
                           bool hit_suppression, const PacketConfig& config) {
    if (hit_suppression && predictor == nullptr)
        throw std::domain_error("online: suppression requires a predictor");

    const std::uint64_t update_bytes = PacketConfig::header_bytes +
                                       (config.timestamp_bits + 7) / 8 +
                                       (config.location_bits + 7) / 8 + (config.id_bits + 7) / 8;

    OnlineVolume volume;
    for (const auto& seq : seqs) {
        std::vector<Symbol> history;
        for (const auto& item : seq.items) {
            ++volume.total;
            const bool predicted =
                hit_suppression && predictor->predict_next(history) == item.symbol;
            if (!predicted) {
                ++volume.sent;
                volume.bytes += update_bytes;
            }
            history.push_back(item.symbol);
        }
    }
    return volume;
}

} // namespace trajcomp
