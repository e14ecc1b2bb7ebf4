#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "test_util.hpp"
#include "trajcomp/grid.hpp"
#include "trajcomp/scenario.hpp"
#include "trajcomp/segment.hpp"

using namespace trajcomp;

TEST_CASE("grid invariants and symbol mapping") {
    const SensorGrid grid = SensorGrid::standard();
    CHECK(grid.node_count() == 256);
    CHECK(grid.cluster_count() == 16);
    CHECK(grid.symbol_of({0, 0}) == 0);
    CHECK(grid.symbol_of({15, 15}) == 255);
    CHECK(grid.location_of(17) == Location{1, 1});
    CHECK(grid.cluster_of(Location{0, 0}) == 0);
    CHECK(grid.cluster_of(Location{4, 0}) == 1);
    CHECK(grid.cluster_of(Location{0, 4}) == 4);
    CHECK(grid.cluster_of(Location{15, 15}) == 15);
    CHECK_THROWS_AS(SensorGrid(16, 16, 5), std::domain_error);
    CHECK_THROWS_AS(grid.symbol_of({16, 0}), std::domain_error);
}

TEST_CASE("hop distance is the Manhattan metric") {
    const SensorGrid grid = SensorGrid::standard();
    CHECK(hop_distance(grid, {3, 3}, {3, 3}) == 0);
    CHECK(hop_distance(grid, {0, 0}, {3, 4}) == 7);
    CHECK(hop_distance(grid, {3, 4}, {0, 0}) == 7);
    CHECK_THROWS_AS(hop_distance(grid, {-1, 0}, {0, 0}), std::domain_error);
}

TEST_CASE("zero dispersion forces colocation") {
    const SensorGrid grid = SensorGrid::standard();
    ScenarioConfig config;
    config.group_size = 4;
    config.gdr = 0.0;
    config.batch_period = 50;
    config.seed = 9;
    const auto seqs = simulate_group(config, grid);
    REQUIRE(seqs.size() == 4);
    for (int j = 1; j < 4; ++j) CHECK(seqs[j].items == seqs[0].items);
}

TEST_CASE("same seed gives identical trajectories, different seed differs") {
    const SensorGrid grid = SensorGrid::standard();
    ScenarioConfig config;
    config.group_size = 3;
    config.gdr = 1.0;
    config.batch_period = 80;
    config.seed = 1234;
    const auto a = simulate_group(config, grid);
    const auto b = simulate_group(config, grid);
    CHECK(a == b);
    config.seed = 1235;
    CHECK(simulate_group(config, grid) != a);
}

TEST_CASE("leader at unit speed moves at most every second half-unit interval") {
    const SensorGrid grid = SensorGrid::standard();
    ScenarioConfig config;
    config.group_size = 1;
    config.gdr = 0;
    config.batch_period = 200;
    config.speed = 1.0;
    config.tracking_interval = 0.5;
    config.seed = 77;
    const auto seqs = simulate_group(config, grid);
    const auto& items = seqs[0].items;
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[i].symbol == items[i - 1].symbol) continue;
        // a location change implies the previous interval was stationary
        REQUIRE(i >= 2);
        CHECK(items[i - 1].symbol == items[i - 2].symbol);
        // and single node steps only
        CHECK(hop_distance(grid, grid.location_of(items[i].symbol),
                           grid.location_of(items[i - 1].symbol)) == 1);
    }
}

TEST_CASE("followers stay within the dispersion radius") {
    const SensorGrid grid = SensorGrid::standard();
    for (double gdr : {0.5, 1.0, 2.0}) {
        ScenarioConfig config;
        config.group_size = 5;
        config.gdr = gdr;
        config.batch_period = 60;
        config.seed = 4;
        const auto seqs = simulate_group(config, grid);
        const int radius = static_cast<int>(std::ceil(gdr));
        for (int j = 1; j < config.group_size; ++j)
            for (std::size_t t = 0; t < seqs[j].items.size(); ++t)
                CHECK(hop_distance(grid, grid.location_of(seqs[j].items[t].symbol),
                                   grid.location_of(seqs[0].items[t].symbol)) <= radius);
    }
}

namespace {

LocationSequence make_seq(ObjectId id, const std::vector<std::pair<int, int>>& path,
                          const SensorGrid& grid, Timestamp t0 = 0) {
    LocationSequence s;
    s.object_id = id;
    for (std::size_t i = 0; i < path.size(); ++i)
        s.items.push_back({static_cast<Timestamp>(t0 + i),
                           grid.symbol_of({path[i].first, path[i].second})});
    return s;
}

// Concatenating a segmentation per object and sorting by time must give
// back the inputs exactly.
void check_lossless(const std::vector<LocationSequence>& seqs, const std::vector<Segment>& segs) {
    std::map<ObjectId, std::vector<SequenceItem>> rebuilt;
    for (const auto& seg : segs)
        for (std::size_t m = 0; m < seg.members.size(); ++m)
            for (std::size_t i = 0; i < seg.bodies[m].size(); ++i)
                rebuilt[seg.members[m]].push_back(
                    {seg.begin + static_cast<Timestamp>(i), seg.bodies[m][i]});
    REQUIRE(rebuilt.size() == seqs.size());
    for (const auto& seq : seqs) {
        auto items = rebuilt.at(seq.object_id);
        std::sort(items.begin(), items.end(),
                  [](const SequenceItem& a, const SequenceItem& b) { return a.t < b.t; });
        CHECK(items == seq.items);
    }
}

} // namespace

TEST_CASE("single object in one cluster gives one solo segment") {
    const SensorGrid grid = SensorGrid::standard();
    const auto seq = make_seq(7, {{0, 0}, {1, 0}, {1, 1}, {2, 2}}, grid);
    const auto segs = segment_and_align({seq}, grid);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].kind == SegmentKind::Solo);
    CHECK(segs[0].members == std::vector<ObjectId>{7});
    CHECK(segs[0].begin == 0);
    CHECK(segs[0].length() == 4);
    check_lossless({seq}, segs);
}

TEST_CASE("three co-resident objects form a group segment with solo fragments") {
    const SensorGrid grid = SensorGrid::standard();
    // objects dwell in cluster 0 (tile x,y < 4); fragments spill into cluster 1
    std::vector<LocationSequence> seqs;
    seqs.push_back(make_seq(0, {{0, 0}, {0, 0}, {0, 1}, {0, 1}, {0, 2}, {0, 2}, {0, 3}, {0, 3}, {1, 3}, {1, 3}}, grid));
    seqs.push_back(make_seq(1, {{4, 0}, {4, 0}, {1, 0}, {1, 1}, {1, 1}, {1, 2}, {1, 2}, {2, 2}, {2, 2}, {2, 3}}, grid));
    seqs.push_back(make_seq(2, {{2, 0}, {2, 0}, {2, 1}, {2, 1}, {3, 1}, {3, 1}, {3, 2}, {3, 2}, {5, 1}, {5, 1}}, grid));

    const auto segs = segment_and_align(seqs, grid);
    std::vector<const Segment*> groups;
    std::vector<const Segment*> solos;
    for (const auto& s : segs) (s.kind == SegmentKind::Group ? groups : solos).push_back(&s);

    REQUIRE(groups.size() == 1);
    CHECK(groups[0]->members == std::vector<ObjectId>{0, 1, 2});
    CHECK(groups[0]->begin == 2);
    CHECK(groups[0]->length() == 6); // window [2,8)
    CHECK(groups[0]->cluster == 0);
    CHECK(solos.size() == 6);
    const int in_cluster0 =
        static_cast<int>(std::count_if(solos.begin(), solos.end(),
                                       [](const Segment* s) { return s->cluster == 0; }));
    CHECK(in_cluster0 == 4);
    check_lossless(seqs, segs);
}

TEST_CASE("cluster crossing splits a sequence at the boundary") {
    const SensorGrid grid = SensorGrid::standard();
    const auto seq = make_seq(
        3, {{3, 0}, {3, 0}, {3, 1}, {3, 1}, {3, 1}, {4, 1}, {4, 1}, {5, 1}, {5, 1}, {5, 2}}, grid);
    const auto segs = segment_and_align({seq}, grid);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].begin == 0);
    CHECK(segs[0].length() == 5);
    CHECK(segs[0].cluster == 0);
    CHECK(segs[1].begin == 5);
    CHECK(segs[1].length() == 5);
    CHECK(segs[1].cluster == 1);
    check_lossless({seq}, segs);
}

TEST_CASE("segmentation is a lossless partition on random scenarios") {
    const SensorGrid grid = SensorGrid::standard();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioConfig config;
        config.group_size = 1 + static_cast<int>(seed % 6);
        config.gdr = 0.3 * static_cast<double>(seed % 4);
        config.batch_period = 40 + static_cast<int>(seed % 50);
        config.seed = seed * 101;
        const auto seqs = simulate_group(config, grid);
        const auto segs = segment_and_align(seqs, grid);
        check_lossless(seqs, segs);
        for (const auto& seg : segs) {
            if (seg.kind != SegmentKind::Group) continue;
            CHECK(seg.members.size() >= 2);
            for (const auto& body : seg.bodies) CHECK(body.size() == seg.length());
        }
    }
    CHECK(segment_and_align({}, grid).empty());
}

TEST_CASE("trajectory csv roundtrip") {
    const SensorGrid grid = SensorGrid::standard();
    ScenarioConfig config;
    config.group_size = 3;
    config.gdr = 1.0;
    config.batch_period = 25;
    config.seed = 15;
    const auto seqs = simulate_group(config, grid);
    std::stringstream io;
    write_trajectories_csv(io, seqs, grid);
    const auto back = read_trajectories_csv(io, grid);
    CHECK(back == seqs);
}

TEST_CASE("scenario config file parsing") {
    std::stringstream in(
        "# demo scenario\n"
        "n = 8\n"
        "gdr = 0.25\n"
        "D = 120\n"
        "eps = 1\n"
        "seed = 42\n"
        "width = 8\nheight = 8\ncluster_grid = 2\n");
    const ScenarioFile file = parse_scenario_file(in);
    CHECK(file.config.group_size == 8);
    CHECK(file.config.gdr == doctest::Approx(0.25));
    CHECK(file.config.batch_period == 120);
    CHECK(file.config.error_bound == 1);
    CHECK(file.config.seed == 42);
    CHECK(file.grid().cluster_count() == 4);

    std::stringstream bad("bogus_key = 1\n");
    CHECK_THROWS(parse_scenario_file(bad));
    std::stringstream invalid("n = 0\n");
    CHECK_THROWS_AS(parse_scenario_file(invalid), std::domain_error);
}
