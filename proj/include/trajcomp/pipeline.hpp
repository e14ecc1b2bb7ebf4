#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "trajcomp/merge.hpp"
#include "trajcomp/packet.hpp"
#include "trajcomp/replace.hpp"
#include "trajcomp/segment.hpp"

namespace trajcomp {

// Shared knowledge between cluster heads and the sink: group membership
// plus the group's movement-pattern predictor. Serialization is byte
// stable; the digest travels with compressed payloads so the receiving
// side can verify it holds the same model.
struct GroupModel {
    std::uint32_t group_id = 0;
    std::vector<ObjectId> members; // ascending
    PatternTree tree;

    void serialize(std::ostream& out) const;
    static GroupModel parse(std::istream& in);
    std::uint64_t digest() const;
};

// Train a group model on the members' location sequences.
GroupModel learn_group_model(std::uint32_t group_id, const std::vector<LocationSequence>& seqs,
                             const SensorGrid& grid, const PstParams& params);

struct CompressOptions {
    int error_bound = 0;
    bool apply_replace = true;
    PacketConfig packet;
    ReplaceOptions replace;
};

struct ClusterPacket {
    int cluster = 0;
    std::vector<std::uint8_t> bytes;
    HuffmanTable table;
};

struct CompressedBatch {
    std::vector<ClusterPacket> packets;
    std::uint64_t model_digest = 0;

    // Size accounting. Packet bytes follow the paper's stream-only view;
    // the second figure adds the per-packet canonical code lengths.
    std::size_t packet_bytes() const;
    std::size_t packet_bytes_with_tables() const;

    double entropy_before = 0.0; // token-weighted mean over cluster packets
    double entropy_after = 0.0;
    std::uint64_t token_count = 0;
    std::uint64_t item_count = 0;
    std::uint64_t predictable_count = 0;
    std::uint64_t replaced_count = 0;
};

// One batch period end to end: segment, merge each encodable group
// segment, run the entropy-reduction pass per cluster, Huffman-code and
// package one packet per cluster.
CompressedBatch compress_batch(const std::vector<LocationSequence>& seqs, const SensorGrid& grid,
                               const GroupModel& model, const CompressOptions& opts);

// Full inverse: unpack, restore hit symbols, unmerge group segments, and
// stitch per-object sequences back together.
std::vector<LocationSequence> unpack_batch(const std::vector<ClusterPacket>& packets,
                                           const SensorGrid& grid, const GroupModel& model,
                                           const CompressOptions& opts);

// Self-contained container for files: packets, tables, options, digest.
void write_batch_container(std::ostream& out, const CompressedBatch& batch,
                           const CompressOptions& opts, const SensorGrid& grid,
                           const GroupModel& model);
struct BatchContainer {
    CompressedBatch batch;
    CompressOptions opts;
    int grid_width = 16, grid_height = 16, cluster_grid = 4;
    std::uint32_t group_id = 0;
    std::vector<ObjectId> members;

    SensorGrid grid() const { return SensorGrid(grid_width, grid_height, cluster_grid); }
};
BatchContainer read_batch_container(std::istream& in);

} // namespace trajcomp
