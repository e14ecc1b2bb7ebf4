#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_util.hpp"
#include "trajcomp/huffman.hpp"
#include "trajcomp/packet.hpp"
#include "trajcomp/pipeline.hpp"

using namespace trajcomp;
using trajcomp::testing::TestRng;

TEST_CASE("bit io roundtrip, msb first") {
    BitWriter w;
    w.put_bits(0b101, 3);
    w.put_bits(0xab, 8);
    w.put_bit(1);
    CHECK(w.bit_count() == 12);
    BitReader r(w.bytes(), w.bit_count());
    CHECK(r.get_bits(3) == 0b101);
    CHECK(r.get_bits(8) == 0xab);
    CHECK(r.get_bit() == 1);
    CHECK(r.remaining() == 0);
    CHECK_THROWS(r.get_bit());
    CHECK(w.bytes()[0] == 0xb5); // 101 10101 -> 0b10110101
}

TEST_CASE("degenerate single-symbol input gets a one-bit code") {
    const auto enc = huffman_encode(std::vector<Symbol>{7, 7, 7, 7});
    CHECK(enc.bit_count == 4);
    CHECK(huffman_decode(enc.table, enc.bytes, enc.bit_count) ==
          std::vector<Symbol>{7, 7, 7, 7});
}

TEST_CASE("two-symbol table uses two one-bit codes") {
    const std::vector<Symbol> seq{0, 0, 1};
    const auto enc = huffman_encode(seq);
    CHECK(enc.table.length_of(0) == 1);
    CHECK(enc.table.length_of(1) == 1);
    CHECK(enc.bit_count == 3);
    CHECK(huffman_decode(enc.table, enc.bytes, enc.bit_count) == seq);
}

TEST_CASE("empty stream with a valid table decodes to nothing") {
    const auto enc = huffman_encode(std::vector<Symbol>{1, 2, 3});
    CHECK(huffman_decode(enc.table, {}, 0).empty());
    CHECK_THROWS_AS(huffman_encode(std::vector<Symbol>{}), std::domain_error);
}

TEST_CASE("dangling bits are a format error") {
    // uniform table: every codeword is 2 bits, so one leftover bit can
    // never complete a symbol
    const std::vector<Symbol> seq{0, 1, 2, 3, 0};
    const auto enc = huffman_encode(seq);
    CHECK(enc.bit_count == 10);
    CHECK_THROWS(huffman_decode(enc.table, enc.bytes, enc.bit_count + 1));
}

TEST_CASE("huffman roundtrips and meets the entropy bound") {
    TestRng rng(200);
    for (int trial = 0; trial < 1000; ++trial) {
        const Symbol a = static_cast<Symbol>(2 + rng.below(30));
        std::vector<Symbol> seq(1 + rng.below(200));
        for (auto& s : seq) s = static_cast<Symbol>(rng.below(a));
        const auto enc = huffman_encode(seq);
        CHECK(huffman_decode(enc.table, enc.bytes, enc.bit_count) == seq);

        std::map<Symbol, int> freq;
        for (Symbol s : seq) freq[s] += 1;
        if (freq.size() >= 2) {
            const double h = shannon_entropy(seq);
            const double per_symbol = static_cast<double>(enc.bit_count) / seq.size();
            CHECK(per_symbol >= h - 1e-9);
            CHECK(per_symbol < h + 1.0);

            // a proper Huffman tree is full, so Kraft holds with equality
            double kraft = 0;
            for (const auto& [s, len] : enc.table.lengths()) kraft += std::ldexp(1.0, -len);
            CHECK(kraft == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("canonical table serialization roundtrips") {
    TestRng rng(201);
    std::vector<Symbol> seq(300);
    for (auto& s : seq) s = static_cast<Symbol>(rng.below(40));
    const auto enc = huffman_encode(seq);
    std::stringstream io;
    enc.table.serialize(io);
    const auto parsed = HuffmanTable::parse(io);
    CHECK(parsed == enc.table);
    CHECK(huffman_decode(parsed, enc.bytes, enc.bit_count) == seq);
    CHECK(enc.table.serialized_bytes() == 2 + 3 * enc.table.lengths().size());
}

TEST_CASE("compression ratio") {
    CHECK(compression_ratio(100, 100) == doctest::Approx(1.0));
    CHECK(compression_ratio(100, 25) == doctest::Approx(4.0));
    CHECK_THROWS_AS(compression_ratio(10, 0), std::domain_error);
}

namespace {

ProcessedSegment solo_segment(Timestamp begin, std::uint32_t id, std::vector<Symbol> tokens) {
    ProcessedSegment s;
    s.kind = SegmentKind::Solo;
    s.begin = begin;
    s.length = static_cast<std::uint32_t>(tokens.size());
    s.id = id;
    s.group_size = 1;
    s.tokens = std::move(tokens);
    return s;
}

} // namespace

TEST_CASE("packet layout: single solo segment size arithmetic") {
    const PacketConfig config;
    const std::vector<Symbol> tokens{1, 2, 3, 1, 2, 1, 1, 3};
    const auto table = HuffmanTable::from_symbols(tokens);
    std::size_t body_bits = 0;
    for (Symbol s : tokens) body_bits += table.length_of(s);

    const auto packet = pack_batch({solo_segment(0, 5, tokens)}, table, config);
    const std::size_t expected =
        PacketConfig::header_bytes +
        (8 + 1 + config.timestamp_bits + config.length_bits + config.id_bits + body_bits + 7) / 8;
    CHECK(packet.size() == expected);

    const Alphabet alphabet(256);
    const auto back = unpack_segments(packet, table, config, {}, alphabet);
    REQUIRE(back.size() == 1);
    CHECK(back[0].kind == SegmentKind::Solo);
    CHECK(back[0].begin == 0);
    CHECK(back[0].length == 8);
    CHECK(back[0].id == 5);
    CHECK(back[0].tokens == tokens);
}

TEST_CASE("packet fields reject overflow") {
    const PacketConfig config; // 8-bit fields
    const std::vector<Symbol> tokens{1};
    const auto table = HuffmanTable::from_symbols(tokens);
    CHECK_THROWS(pack_batch({solo_segment(300, 1, tokens)}, table, config));
    CHECK_THROWS(pack_batch({solo_segment(0, 300, tokens)}, table, config));
    auto long_seg = solo_segment(0, 1, std::vector<Symbol>(300, 1));
    CHECK_THROWS(pack_batch({long_seg}, table, config));
}

TEST_CASE("packet roundtrip with group segments and verbatim runs") {
    const PacketConfig config;
    const Alphabet alphabet(256);
    const Symbol delim = alphabet.delim();
    // group of 3: columns [rep 9][verbatim 1 2 3 | 4 5 6][rep 9][hit]
    ProcessedSegment g;
    g.kind = SegmentKind::Group;
    g.begin = 10;
    g.length = 5;
    g.id = 0;
    g.group_size = 3;
    g.tokens = {9, delim, 1, 2, 3, 4, 5, 6, delim, 9, alphabet.hit()};
    // a trailing group segment that ends inside a verbatim run
    ProcessedSegment tail;
    tail.kind = SegmentKind::Group;
    tail.begin = 15;
    tail.length = 2;
    tail.id = 0;
    tail.group_size = 3;
    tail.tokens = {7, delim, 1, 2, 3, delim};
    const auto solo = solo_segment(20, 2, {4, 4, alphabet.hit(), 4});

    std::vector<Symbol> all;
    for (const auto& s : {g, tail, solo})
        all.insert(all.end(), s.tokens.begin(), s.tokens.end());
    const auto table = HuffmanTable::from_symbols(all);

    const auto packet = pack_batch({g, tail, solo}, table, config);
    const auto back = unpack_segments(packet, table, config, {{0, 3}}, alphabet);
    REQUIRE(back.size() == 3);
    CHECK(back[0].tokens == g.tokens);
    CHECK(back[1].tokens == tail.tokens);
    CHECK(back[2].tokens == solo.tokens);
    CHECK(back[0].group_size == 3);

    // the layout stays exact under non-default field widths
    PacketConfig wide;
    wide.timestamp_bits = 12;
    wide.length_bits = 10;
    wide.id_bits = 5;
    const auto packet2 = pack_batch({g, tail, solo}, table, wide);
    CHECK(packet2 != packet);
    const auto back2 = unpack_segments(packet2, table, wide, {{0, 3}}, alphabet);
    REQUIRE(back2.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back2[i].tokens == back[i].tokens);
        CHECK(back2[i].begin == back[i].begin);
        CHECK(back2[i].id == back[i].id);
    }
}

TEST_CASE("online volume accounting") {
    const SensorGrid grid = SensorGrid::standard();
    const PacketConfig config;

    SUBCASE("one object, four intervals, no suppression") {
        LocationSequence seq;
        seq.object_id = 0;
        for (Timestamp t = 0; t < 4; ++t) seq.items.push_back({t, 7});
        const auto v = online_volume({seq}, nullptr, false, config);
        CHECK(v.bytes == 4 * (4 + 1 + 1 + 1));
        CHECK(v.sent == 4);
        CHECK(v.hit_rate() == doctest::Approx(0.0));
    }
    SUBCASE("a perfect predictor suppresses all but the surprises") {
        const std::vector<Symbol> constant(6, 3);
        const auto tree = PatternTree::learn(constant, grid.node_count(), PstParams{});
        LocationSequence seq;
        seq.object_id = 0;
        for (Timestamp t = 0; t < 6; ++t) seq.items.push_back({t, 3});
        const auto v = online_volume({seq}, &tree, true, config);
        CHECK(v.sent == 0);
        CHECK(v.bytes == 0);
        CHECK(v.hit_rate() == doctest::Approx(1.0));
    }
    SUBCASE("suppression never sends more") {
        TestRng rng(77);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            ScenarioConfig config2;
            config2.group_size = 3;
            config2.gdr = 0.5;
            config2.batch_period = 50;
            config2.seed = seed;
            const auto seqs = simulate_group(config2, grid);
            const auto model = learn_group_model(0, seqs, grid, PstParams{});
            const auto with = online_volume(seqs, &model.tree, true, config);
            const auto without = online_volume(seqs, nullptr, false, config);
            CHECK(with.bytes <= without.bytes);
        }
    }
}

TEST_CASE("pipeline end-to-end roundtrip is exact at zero error bound") {
    const SensorGrid grid = SensorGrid::standard();
    TestRng rng(300);
    for (int trial = 0; trial < 15; ++trial) {
        ScenarioConfig config;
        config.group_size = 1 + static_cast<int>(rng.below(6));
        config.gdr = 0.25 * static_cast<double>(rng.below(5));
        config.batch_period = 30 + static_cast<int>(rng.below(80));
        config.seed = 7000 + trial;
        const auto seqs = simulate_group(config, grid);
        const auto model = learn_group_model(0, seqs, grid, PstParams{});

        CompressOptions opts;
        opts.error_bound = 0;
        const auto batch = compress_batch(seqs, grid, model, opts);
        const auto back = unpack_batch(batch.packets, grid, model, opts);
        CHECK(back == seqs);
        CHECK(batch.packet_bytes() > 0);
        CHECK(batch.packet_bytes_with_tables() > batch.packet_bytes());
    }
}

TEST_CASE("pipeline respects the error bound") {
    const SensorGrid grid = SensorGrid::standard();
    for (int eps : {1, 2}) {
        ScenarioConfig config;
        config.group_size = 5;
        config.gdr = 1.0;
        config.batch_period = 60;
        config.seed = 31 + eps;
        const auto seqs = simulate_group(config, grid);
        const auto model = learn_group_model(0, seqs, grid, PstParams{});

        CompressOptions opts;
        opts.error_bound = eps;
        const auto batch = compress_batch(seqs, grid, model, opts);
        const auto back = unpack_batch(batch.packets, grid, model, opts);
        REQUIRE(back.size() == seqs.size());
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            REQUIRE(back[i].items.size() == seqs[i].items.size());
            for (std::size_t t = 0; t < seqs[i].items.size(); ++t) {
                CHECK(back[i].items[t].t == seqs[i].items[t].t);
                CHECK(hop_distance(grid, grid.location_of(back[i].items[t].symbol),
                                   grid.location_of(seqs[i].items[t].symbol)) <= eps);
            }
        }
    }
}

TEST_CASE("replace pass never hurts the packed size on group workloads") {
    const SensorGrid grid = SensorGrid::standard();
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        ScenarioConfig config;
        config.group_size = 4;
        config.gdr = 0.25;
        config.batch_period = 80;
        config.seed = seed * 13;
        const auto seqs = simulate_group(config, grid);
        const auto model = learn_group_model(0, seqs, grid, PstParams{});
        CompressOptions with;
        CompressOptions without;
        without.apply_replace = false;
        const auto a = compress_batch(seqs, grid, model, with);
        const auto b = compress_batch(seqs, grid, model, without);
        CHECK(a.packet_bytes() <= b.packet_bytes());
        CHECK(a.entropy_after <= a.entropy_before + 1e-12);
    }
}

TEST_CASE("empty input compresses to an empty batch") {
    const SensorGrid grid = SensorGrid::standard();
    GroupModel model;
    model.group_id = 0;
    const auto batch = compress_batch({}, grid, model, CompressOptions{});
    CHECK(batch.packets.empty());
    CHECK(batch.packet_bytes() == 0);
    CHECK(unpack_batch(batch.packets, grid, model, CompressOptions{}).empty());
}

TEST_CASE("batch container file roundtrips") {
    const SensorGrid grid = SensorGrid::standard();
    ScenarioConfig config;
    config.group_size = 3;
    config.gdr = 0.5;
    config.batch_period = 40;
    config.seed = 404;
    const auto seqs = simulate_group(config, grid);
    const auto model = learn_group_model(0, seqs, grid, PstParams{});
    CompressOptions opts;
    const auto batch = compress_batch(seqs, grid, model, opts);

    std::stringstream io;
    write_batch_container(io, batch, opts, grid, model);
    const auto container = read_batch_container(io);
    CHECK(container.batch.model_digest == batch.model_digest);
    CHECK(container.members == model.members);
    REQUIRE(container.batch.packets.size() == batch.packets.size());
    for (std::size_t i = 0; i < batch.packets.size(); ++i) {
        CHECK(container.batch.packets[i].bytes == batch.packets[i].bytes);
        CHECK(container.batch.packets[i].table == batch.packets[i].table);
    }
    const auto back = unpack_batch(container.batch.packets, container.grid(), model,
                                   container.opts);
    CHECK(back == seqs);
}

TEST_CASE("group model serialization and digest") {
    const SensorGrid grid = SensorGrid::standard();
    ScenarioConfig config;
    config.group_size = 2;
    config.gdr = 0.0;
    config.batch_period = 30;
    config.seed = 5;
    const auto seqs = simulate_group(config, grid);
    const auto model = learn_group_model(3, seqs, grid, PstParams{});

    std::stringstream io;
    model.serialize(io);
    const auto parsed = GroupModel::parse(io);
    CHECK(parsed.group_id == 3);
    CHECK(parsed.members == model.members);
    CHECK(parsed.digest() == model.digest());
    CHECK(parsed.tree == model.tree);
}
