#pragma once

#include <vector>

#include "trajcomp/hcs.hpp"

namespace trajcomp {

// Normalized mutual information between two partitions of the same object
// set, 2*I/(H1+H2). Two zero-entropy partitions score 1.
double normalized_mutual_information(const GroupingResult& a, const GroupingResult& b);

// Combine local grouping results into a consensus: build the pairwise
// Jaccard co-association graph, threshold it at `partition_param` evenly
// spaced levels, and return the candidate partition (connected components)
// with the highest mean NMI against the local results.
GroupingResult ce_ensemble(const std::vector<GroupingResult>& locals, int partition_param);

} // namespace trajcomp
