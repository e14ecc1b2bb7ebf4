#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trajcomp/grid.hpp"
#include "trajcomp/types.hpp"

namespace trajcomp {

struct SequenceItem {
    Timestamp t = 0;
    Symbol symbol = 0;

    bool operator==(const SequenceItem&) const = default;
};

// Per-object, per-tracking-interval sequence of location symbols.
struct LocationSequence {
    ObjectId object_id = 0;
    std::vector<SequenceItem> items;

    bool operator==(const LocationSequence&) const = default;

    std::vector<Symbol> symbols() const;
};

struct ScenarioConfig {
    int group_size = 4;           // n
    double gdr = 0.5;             // group dispersion radius, hops
    int batch_period = 100;       // D, tracking intervals
    int error_bound = 0;          // eps, hops
    double tracking_interval = 0.5;
    double speed = 1.0;           // nodes per time unit
    double movement_range = 0.0;  // 0 = half the grid diagonal
    std::uint64_t seed = 1;

    void validate() const;
};

// Reference Point Group Mobility: the leader walks straight 4-connected
// lines between randomly chosen endpoints; followers are redrawn uniformly
// within the dispersion radius at every interval. Deterministic per seed.
std::vector<LocationSequence> simulate_group(const ScenarioConfig& config, const SensorGrid& grid);

// Trajectory exchange CSV: header "t,object_id,x,y", one row per object per
// tracking interval.
void write_trajectories_csv(std::ostream& out, const std::vector<LocationSequence>& seqs,
                            const SensorGrid& grid);
std::vector<LocationSequence> read_trajectories_csv(std::istream& in, const SensorGrid& grid);

// Flat key=value config file ('#' starts a comment). Unknown keys are an
// error; absent keys keep their defaults.
struct ScenarioFile {
    ScenarioConfig config;
    int grid_width = 16;
    int grid_height = 16;
    int cluster_grid = 4;

    SensorGrid grid() const { return SensorGrid(grid_width, grid_height, cluster_grid); }
};

ScenarioFile parse_scenario_file(std::istream& in);

} // namespace trajcomp
