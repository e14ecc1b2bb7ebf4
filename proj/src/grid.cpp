#include "trajcomp/grid.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace trajcomp {

SensorGrid::SensorGrid(int width, int height, int cluster_grid)
    : width_(width), height_(height), cluster_grid_(cluster_grid) {
    if (width <= 0 || height <= 0)
        throw std::domain_error("grid: dimensions must be positive");
    if (cluster_grid <= 0)
        throw std::domain_error("grid: cluster grid must be positive");
    if (width % cluster_grid != 0 || height % cluster_grid != 0)
        throw std::domain_error("grid: clusters must tile the grid evenly");
}

Symbol SensorGrid::symbol_of(Location p) const {
    if (!contains(p))
        throw std::domain_error("grid: location (" + std::to_string(p.x) + "," +
                                std::to_string(p.y) + ") off grid");
    return static_cast<Symbol>(p.y * width_ + p.x);
}

Location SensorGrid::location_of(Symbol s) const {
    if (s >= node_count())
        throw std::domain_error("grid: symbol " + std::to_string(s) + " off grid");
    return Location{static_cast<int>(s) % width_, static_cast<int>(s) / width_};
}

int SensorGrid::cluster_of(Location p) const {
    if (!contains(p))
        throw std::domain_error("grid: location off grid");
    const int tile_w = width_ / cluster_grid_;
    const int tile_h = height_ / cluster_grid_;
    return (p.y / tile_h) * cluster_grid_ + (p.x / tile_w);
}

int hop_distance(const SensorGrid& grid, Location a, Location b) {
    if (!grid.contains(a) || !grid.contains(b))
        throw std::domain_error("hop_distance: location off grid");
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

} // namespace trajcomp
