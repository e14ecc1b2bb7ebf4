#include "trajcomp/pipeline.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace trajcomp {

void GroupModel::serialize(std::ostream& out) const {
    out << "GROUPMODEL 1\n";
    out << "group " << group_id << "\n";
    out << "members " << members.size();
    for (ObjectId m : members) out << " " << m;
    out << "\n";
    tree.serialize(out);
}

GroupModel GroupModel::parse(std::istream& in) {
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (!in || tag != "GROUPMODEL" || version != 1)
        throw std::runtime_error("group model: bad header");
    GroupModel model;
    in >> tag >> model.group_id;
    if (!in || tag != "group") throw std::runtime_error("group model: bad group line");
    std::size_t count = 0;
    in >> tag >> count;
    if (!in || tag != "members") throw std::runtime_error("group model: bad members line");
    for (std::size_t i = 0; i < count; ++i) {
        ObjectId id;
        in >> id;
        model.members.push_back(id);
    }
    if (!in) throw std::runtime_error("group model: truncated members");
    if (!std::is_sorted(model.members.begin(), model.members.end()))
        throw std::runtime_error("group model: members not sorted");
    model.tree = PatternTree::parse(in);
    return model;
}

std::uint64_t GroupModel::digest() const {
    std::ostringstream bytes;
    serialize(bytes);
    const std::string s = bytes.str();
    return fnv1a64(std::span<const char>(s.data(), s.size()));
}

GroupModel learn_group_model(std::uint32_t group_id, const std::vector<LocationSequence>& seqs,
                             const SensorGrid& grid, const PstParams& params) {
    GroupModel model;
    model.group_id = group_id;
    std::vector<std::vector<Symbol>> training;
    for (const auto& seq : seqs) {
        model.members.push_back(seq.object_id);
        training.push_back(seq.symbols());
    }
    std::sort(model.members.begin(), model.members.end());
    model.tree = PatternTree::learn(training, grid.node_count(), params);
    return model;
}

std::size_t CompressedBatch::packet_bytes() const {
    std::size_t total = 0;
    for (const auto& p : packets) total += p.bytes.size();
    return total;
}

std::size_t CompressedBatch::packet_bytes_with_tables() const {
    std::size_t total = 0;
    for (const auto& p : packets) total += p.bytes.size() + p.table.serialized_bytes();
    return total;
}

namespace {

struct StagedSegment {
    SegmentKind kind;
    Timestamp begin;
    std::uint32_t length;
    std::uint32_t id;
    std::uint32_t group_size;
    std::vector<Symbol> tokens;
};

// Group segments are encodable only when their member set matches the
// shared model exactly; anything else is sent as solo segments so the
// sink can always resolve membership from the c-bit id field.
std::vector<StagedSegment> stage_cluster_segments(const std::vector<const Segment*>& segs,
                                                  const SensorGrid& grid, const GroupModel& model,
                                                  const CompressOptions& opts) {
    std::vector<StagedSegment> staged;
    for (const Segment* seg : segs) {
        const bool encodable_group =
            seg->kind == SegmentKind::Group && seg->members == model.members;
        if (encodable_group) {
            std::vector<Column> columns(seg->length());
            for (std::size_t t = 0; t < seg->length(); ++t) {
                columns[t].index = t;
                for (const auto& body : seg->bodies) columns[t].symbols.push_back(body[t]);
            }
            const MergedSequence merged = merge_group(columns, opts.error_bound, grid);
            staged.push_back(StagedSegment{SegmentKind::Group, seg->begin,
                                           static_cast<std::uint32_t>(seg->length()),
                                           model.group_id,
                                           static_cast<std::uint32_t>(seg->members.size()),
                                           merged.tokens});
        } else {
            for (std::size_t m = 0; m < seg->members.size(); ++m)
                staged.push_back(StagedSegment{SegmentKind::Solo, seg->begin,
                                               static_cast<std::uint32_t>(seg->bodies[m].size()),
                                               seg->members[m], 1, seg->bodies[m]});
        }
    }
    std::sort(staged.begin(), staged.end(), [](const StagedSegment& a, const StagedSegment& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.kind != b.kind) return a.kind == SegmentKind::Group;
        return a.id < b.id;
    });
    return staged;
}

} // namespace

CompressedBatch compress_batch(const std::vector<LocationSequence>& seqs, const SensorGrid& grid,
                               const GroupModel& model, const CompressOptions& opts) {
    const Alphabet alphabet = grid.alphabet();
    const auto segments = segment_and_align(seqs, grid);

    std::map<int, std::vector<const Segment*>> by_cluster;
    for (const auto& seg : segments) by_cluster[seg.cluster].push_back(&seg);

    CompressedBatch batch;
    batch.model_digest = model.digest();
    for (const auto& seq : seqs) batch.item_count += seq.items.size();

    double entropy_before_weighted = 0.0;
    double entropy_after_weighted = 0.0;

    for (const auto& [cluster, segs] : by_cluster) {
        auto staged = stage_cluster_segments(segs, grid, model, opts);

        std::vector<std::vector<Symbol>> streams;
        streams.reserve(staged.size());
        for (const auto& s : staged) streams.push_back(s.tokens);

        std::vector<double> trace;
        if (opts.apply_replace) {
            SegmentedReplaceResult replaced =
                replace_segments(streams, model.tree, alphabet, opts.replace);
            trace = std::move(replaced.entropy_trace);
            batch.predictable_count += replaced.predictable_count;
            batch.replaced_count += replaced.replaced_count;
            for (std::size_t i = 0; i < staged.size(); ++i)
                staged[i].tokens = std::move(replaced.segments[i]);
            streams.clear();
        }

        std::vector<Symbol> all_tokens;
        for (const auto& s : staged)
            all_tokens.insert(all_tokens.end(), s.tokens.begin(), s.tokens.end());
        if (all_tokens.empty()) continue;

        const double h_after = shannon_entropy(all_tokens);
        const double h_before = trace.empty() ? h_after : trace.front();
        entropy_before_weighted += h_before * static_cast<double>(all_tokens.size());
        entropy_after_weighted += h_after * static_cast<double>(all_tokens.size());
        batch.token_count += all_tokens.size();

        // The segment-count field is 8 bits; a cluster head with more
        // segments ships several packets.
        for (std::size_t first = 0; first < staged.size(); first += 255) {
            const std::size_t last = std::min(staged.size(), first + 255);
            std::vector<ProcessedSegment> processed;
            std::vector<Symbol> packet_tokens;
            processed.reserve(last - first);
            for (std::size_t i = first; i < last; ++i) {
                packet_tokens.insert(packet_tokens.end(), staged[i].tokens.begin(),
                                     staged[i].tokens.end());
                processed.push_back(ProcessedSegment{staged[i].kind, staged[i].begin,
                                                     staged[i].length, staged[i].id,
                                                     staged[i].group_size,
                                                     std::move(staged[i].tokens)});
            }
            ClusterPacket packet;
            packet.cluster = cluster;
            packet.table = HuffmanTable::from_symbols(packet_tokens);
            packet.bytes = pack_batch(processed, packet.table, opts.packet);
            batch.packets.push_back(std::move(packet));
        }
    }

    if (batch.token_count > 0) {
        batch.entropy_before = entropy_before_weighted / static_cast<double>(batch.token_count);
        batch.entropy_after = entropy_after_weighted / static_cast<double>(batch.token_count);
    }
    return batch;
}

std::vector<LocationSequence> unpack_batch(const std::vector<ClusterPacket>& packets,
                                           const SensorGrid& grid, const GroupModel& model,
                                           const CompressOptions& opts) {
    const Alphabet alphabet = grid.alphabet();
    const std::map<std::uint32_t, std::uint32_t> group_sizes = {
        {model.group_id, static_cast<std::uint32_t>(model.members.size())}};

    std::map<ObjectId, std::vector<SequenceItem>> items;
    for (const auto& packet : packets) {
        auto segments =
            unpack_segments(packet.bytes, packet.table, opts.packet, group_sizes, alphabet);

        std::vector<std::vector<Symbol>> streams;
        streams.reserve(segments.size());
        for (const auto& s : segments) streams.push_back(s.tokens);
        const auto restored = restore_segments(streams, model.tree, alphabet);

        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& seg = segments[i];
            if (seg.kind == SegmentKind::Group) {
                MergedSequence merged{seg.group_size, restored[i]};
                const auto columns = unmerge(merged, alphabet);
                if (columns.size() != seg.length)
                    throw std::runtime_error("unpack: group segment length mismatch");
                for (std::size_t t = 0; t < columns.size(); ++t)
                    for (std::size_t m = 0; m < model.members.size(); ++m)
                        items[model.members[m]].push_back(
                            {seg.begin + static_cast<Timestamp>(t), columns[t].symbols[m]});
            } else {
                for (std::size_t t = 0; t < restored[i].size(); ++t)
                    items[seg.id].push_back(
                        {seg.begin + static_cast<Timestamp>(t), restored[i][t]});
            }
        }
    }

    std::vector<LocationSequence> seqs;
    for (auto& [id, list] : items) {
        std::sort(list.begin(), list.end(),
                  [](const SequenceItem& a, const SequenceItem& b) { return a.t < b.t; });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (list[i].t == list[i - 1].t)
                throw std::runtime_error("unpack: overlapping segments for object " +
                                         std::to_string(id));
        seqs.push_back(LocationSequence{id, std::move(list)});
    }
    return seqs;
}

namespace {

std::string bytes_to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::vector<std::uint8_t> hex_to_bytes(const std::string& hex) {
    if (hex.size() % 2) throw std::runtime_error("container: odd hex string");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw std::runtime_error("container: bad hex digit");
    };
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return out;
}

} // namespace

void write_batch_container(std::ostream& out, const CompressedBatch& batch,
                           const CompressOptions& opts, const SensorGrid& grid,
                           const GroupModel& model) {
    nlohmann::json j;
    j["format"] = "tcbatch-1";
    j["grid"] = {{"width", grid.width()},
                 {"height", grid.height()},
                 {"cluster_grid", grid.cluster_grid()}};
    j["packet_config"] = {{"timestamp_bits", opts.packet.timestamp_bits},
                          {"location_bits", opts.packet.location_bits},
                          {"id_bits", opts.packet.id_bits},
                          {"length_bits", opts.packet.length_bits}};
    j["error_bound"] = opts.error_bound;
    j["replace"] = opts.apply_replace;
    j["model_digest"] = batch.model_digest;
    j["group"] = {{"id", model.group_id}, {"members", model.members}};
    j["packets"] = nlohmann::json::array();
    for (const auto& p : batch.packets) {
        std::ostringstream table;
        p.table.serialize(table);
        j["packets"].push_back({{"cluster", p.cluster},
                                {"bytes", bytes_to_hex(p.bytes)},
                                {"table", table.str()}});
    }
    out << j.dump(1) << "\n";
}

BatchContainer read_batch_container(std::istream& in) {
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "tcbatch-1")
        throw std::runtime_error("container: unknown format");

    BatchContainer c;
    c.grid_width = j["grid"]["width"].get<int>();
    c.grid_height = j["grid"]["height"].get<int>();
    c.cluster_grid = j["grid"]["cluster_grid"].get<int>();
    c.opts.packet.timestamp_bits = j["packet_config"]["timestamp_bits"].get<int>();
    c.opts.packet.location_bits = j["packet_config"]["location_bits"].get<int>();
    c.opts.packet.id_bits = j["packet_config"]["id_bits"].get<int>();
    c.opts.packet.length_bits = j["packet_config"]["length_bits"].get<int>();
    c.opts.error_bound = j["error_bound"].get<int>();
    c.opts.apply_replace = j["replace"].get<bool>();
    c.batch.model_digest = j["model_digest"].get<std::uint64_t>();
    c.group_id = j["group"]["id"].get<std::uint32_t>();
    c.members = j["group"]["members"].get<std::vector<ObjectId>>();
    for (const auto& p : j["packets"]) {
        ClusterPacket packet;
        packet.cluster = p["cluster"].get<int>();
        packet.bytes = hex_to_bytes(p["bytes"].get<std::string>());
        std::istringstream table(p["table"].get<std::string>());
        packet.table = HuffmanTable::parse(table);
        c.batch.packets.push_back(std::move(packet));
    }
    return c;
}

} // namespace trajcomp
