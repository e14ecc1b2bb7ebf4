#pragma once

#include <cstdint>

#include "trajcomp/types.hpp"

namespace trajcomp {

struct Location {
    int x = 0;
    int y = 0;

    bool operator==(const Location&) const = default;
};

// Two-layer tracking network: a width x height mesh of sensor nodes tiled
// into cluster_grid x cluster_grid equal square clusters.
class SensorGrid {
public:
    SensorGrid(int width, int height, int cluster_grid);

    static SensorGrid standard() { return SensorGrid(16, 16, 4); }

    int width() const { return width_; }
    int height() const { return height_; }
    int cluster_grid() const { return cluster_grid_; }
    int node_count() const { return width_ * height_; }
    int cluster_count() const { return cluster_grid_ * cluster_grid_; }

    bool contains(Location p) const {
        return p.x >= 0 && p.x < width_ && p.y >= 0 && p.y < height_;
    }

    Symbol symbol_of(Location p) const;
    Location location_of(Symbol s) const;

    // Index of the cluster tile containing the node.
    int cluster_of(Location p) const;
    int cluster_of(Symbol s) const { return cluster_of(location_of(s)); }

    Alphabet alphabet() const { return Alphabet(static_cast<std::uint32_t>(node_count())); }

    bool operator==(const SensorGrid&) const = default;

private:
    int width_;
    int height_;
    int cluster_grid_;
};

// Hop count between two nodes of the mesh (Manhattan metric).
int hop_distance(const SensorGrid& grid, Location a, Location b);

} // namespace trajcomp
