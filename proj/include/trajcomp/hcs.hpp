#pragma once

#include <map>
#include <vector>

#include "trajcomp/similarity.hpp"

namespace trajcomp {

// A partition of the object set into groups. Group ids are canonical:
// numbered 0,1,2,... by ascending smallest member id.
struct GroupingResult {
    std::map<ObjectId, int> partition;
    int source = 0; // local region the result came from

    std::vector<std::vector<ObjectId>> groups() const;
    static GroupingResult from_groups(const std::vector<std::vector<ObjectId>>& groups,
                                      int source = 0);
    void canonicalize();

    bool same_partition(const GroupingResult& other) const;
};

// Deterministic global minimum edge cut (Stoer-Wagner). Vertices are local
// indices into an adjacency matrix; returns the cut weight and one side.
struct MinCut {
    double weight = 0;
    std::vector<int> side;
};
MinCut stoer_wagner_min_cut(const std::vector<std::vector<double>>& adj);

// Highly connected subgraphs: recursively split by global min cut until
// every remaining subgraph has edge connectivity > |V|/2. Isolated vertices
// become singleton groups.
GroupingResult hcs_cluster(const SimilarityGraph& g);

} // namespace trajcomp
