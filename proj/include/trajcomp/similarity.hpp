#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "trajcomp/pst.hpp"

namespace trajcomp {

// Similarity of two objects' movement patterns: the negative log of the
// weight-averaged L1 distance between the trees' prediction distributions
// over the union of their significant patterns, each pattern weighted by
// the mean of its significance in the two trees. The distance is floored
// at d_min so identical trees score -log(d_min).
double simp_score(const PatternTree& t1, const PatternTree& t2, double d_min = 1e-6);

struct SimilarityGraph {
    std::vector<ObjectId> vertices;                 // ascending
    std::set<std::pair<ObjectId, ObjectId>> edges;  // first < second

    bool has_edge(ObjectId a, ObjectId b) const {
        if (a == b) return false;
        return edges.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
    }
};

SimilarityGraph build_similarity_graph(const std::map<ObjectId, PatternTree>& trees,
                                       double sim_theta);

} // namespace trajcomp
