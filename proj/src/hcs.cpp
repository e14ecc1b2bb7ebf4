#include "trajcomp/hcs.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace trajcomp {

std::vector<std::vector<ObjectId>> GroupingResult::groups() const {
    std::map<int, std::vector<ObjectId>> by_group;
    for (const auto& [obj, g] : partition) by_group[g].push_back(obj);
    std::vector<std::vector<ObjectId>> out;
    for (auto& [g, members] : by_group) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

GroupingResult GroupingResult::from_groups(const std::vector<std::vector<ObjectId>>& groups,
                                           int source) {
    GroupingResult r;
    r.source = source;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (ObjectId obj : groups[g]) {
            if (r.partition.count(obj))
                throw std::domain_error("grouping: object appears in two groups");
            r.partition[obj] = static_cast<int>(g);
        }
    r.canonicalize();
    return r;
}

void GroupingResult::canonicalize() {
    const auto gs = groups();
    std::map<ObjectId, int> renumbered;
    for (std::size_t g = 0; g < gs.size(); ++g)
        for (ObjectId obj : gs[g]) renumbered[obj] = static_cast<int>(g);
    partition = std::move(renumbered);
}

bool GroupingResult::same_partition(const GroupingResult& other) const {
    GroupingResult a = *this, b = other;
    a.canonicalize();
    b.canonicalize();
    return a.partition == b.partition;
}

MinCut stoer_wagner_min_cut(const std::vector<std::vector<double>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n < 2) throw std::domain_error("min cut: need at least two vertices");

    // Contraction works on groups of original vertices.
    std::vector<std::vector<int>> merged(n);
    for (int i = 0; i < n; ++i) merged[i] = {i};
    std::vector<std::vector<double>> w = adj;
    std::vector<bool> gone(n, false);

    MinCut best;
    best.weight = std::numeric_limits<double>::infinity();

    for (int phase = n; phase > 1; --phase) {
        // Maximum adjacency search; ties resolve to the smallest index so
        // runs are reproducible.
        std::vector<double> conn(n, 0.0);
        std::vector<bool> added(n, false);
        int prev = -1, last = -1;
        for (int step = 0; step < phase; ++step) {
            int pick = -1;
            for (int v = 0; v < n; ++v) {
                if (gone[v] || added[v]) continue;
                if (pick == -1 || conn[v] > conn[pick]) pick = v;
            }
            added[pick] = true;
            prev = last;
            last = pick;
            for (int v = 0; v < n; ++v)
                if (!gone[v] && !added[v]) conn[v] += w[pick][v];
        }

        const double cut_weight = conn[last];
        if (cut_weight < best.weight) {
            best.weight = cut_weight;
            best.side = merged[last];
        }

        // Merge `last` into `prev`.
        gone[last] = true;
        merged[prev].insert(merged[prev].end(), merged[last].begin(), merged[last].end());
        for (int v = 0; v < n; ++v) {
            if (gone[v] || v == prev) continue;
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
    }
    std::sort(best.side.begin(), best.side.end());
    return best;
}

namespace {

void hcs_recurse(const SimilarityGraph& g, const std::vector<ObjectId>& vertices,
                 std::vector<std::vector<ObjectId>>& groups) {
    const int n = static_cast<int>(vertices.size());
    if (n == 0) return;
    if (n == 1) {
        groups.push_back(vertices);
        return;
    }

    std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.has_edge(vertices[i], vertices[j])) adj[i][j] = adj[j][i] = 1.0;

    const MinCut cut = stoer_wagner_min_cut(adj);
    // For unit weights the global min cut weight is the edge connectivity.
    if (cut.weight > n / 2.0) {
        groups.push_back(vertices);
        return;
    }

    std::vector<bool> in_side(n, false);
    for (int v : cut.side) in_side[v] = true;
    std::vector<ObjectId> side, rest;
    for (int i = 0; i < n; ++i)
        (in_side[i] ? side : rest).push_back(vertices[i]);
    hcs_recurse(g, side, groups);
    hcs_recurse(g, rest, groups);
}

} // namespace

GroupingResult hcs_cluster(const SimilarityGraph& g) {
    std::vector<std::vector<ObjectId>> groups;
    hcs_recurse(g, g.vertices, groups);
    return GroupingResult::from_groups(groups);
}

} // namespace trajcomp
