#pragma once

#include <vector>

#include "trajcomp/grid.hpp"
#include "trajcomp/scenario.hpp"

namespace trajcomp {

enum class SegmentKind { Group, Solo };

// A time-contiguous slice of one or more location sequences, resident in a
// single cluster. Group segments hold the aligned slices of >= 2 objects
// over a common time window; solo segments hold one object's slice.
struct Segment {
    SegmentKind kind = SegmentKind::Solo;
    int cluster = 0;
    Timestamp begin = 0;
    std::vector<ObjectId> members;            // ascending object id
    std::vector<std::vector<Symbol>> bodies;  // bodies[i] belongs to members[i]

    std::size_t length() const { return bodies.empty() ? 0 : bodies.front().size(); }
};

// Split each sequence at cluster boundaries, then group co-resident slices
// of distinct objects into aligned group segments over the intersection of
// their windows. Leftover prefixes/suffixes become solo segments. Every
// input item lands in exactly one output segment.
std::vector<Segment> segment_and_align(const std::vector<LocationSequence>& seqs,
                                       const SensorGrid& grid);

} // namespace trajcomp
