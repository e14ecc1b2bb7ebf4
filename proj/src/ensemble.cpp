#include "trajcomp/ensemble.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace trajcomp {
namespace {

double partition_entropy(const std::vector<std::vector<ObjectId>>& groups, std::size_t n) {
    double h = 0.0;
    for (const auto& g : groups) {
        const double p = static_cast<double>(g.size()) / static_cast<double>(n);
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace

double normalized_mutual_information(const GroupingResult& a, const GroupingResult& b) {
    if (a.partition.size() != b.partition.size())
        throw std::domain_error("nmi: partitions cover different object sets");
    const std::size_t n = a.partition.size();
    if (n == 0) throw std::domain_error("nmi: empty partitions");

    const auto ga = a.groups();
    const auto gb = b.groups();

    std::map<std::pair<int, int>, std::size_t> joint;
    for (const auto& [obj, gi] : a.partition) {
        const auto it = b.partition.find(obj);
        if (it == b.partition.end())
            throw std::domain_error("nmi: partitions cover different object sets");
        joint[{gi, it->second}] += 1;
    }

    double info = 0.0;
    for (const auto& [cell, count] : joint) {
        const double pxy = static_cast<double>(count) / static_cast<double>(n);
        const double px = static_cast<double>(ga[cell.first].size()) / static_cast<double>(n);
        const double py = static_cast<double>(gb[cell.second].size()) / static_cast<double>(n);
        info += pxy * std::log2(pxy / (px * py));
    }

    const double ha = partition_entropy(ga, n);
    const double hb = partition_entropy(gb, n);
    if (ha == 0.0 && hb == 0.0) return 1.0;
    return 2.0 * info / (ha + hb);
}

GroupingResult ce_ensemble(const std::vector<GroupingResult>& locals, int partition_param) {
    if (locals.empty()) throw std::domain_error("ce: need at least one local result");
    if (partition_param < 1) throw std::domain_error("ce: partition_param must be >= 1");

    std::vector<ObjectId> objects;
    for (const auto& [obj, g] : locals.front().partition) objects.push_back(obj);
    for (const auto& local : locals) {
        if (local.partition.size() != objects.size())
            throw std::domain_error("ce: local results cover different object sets");
        for (ObjectId obj : objects)
            if (local.partition.count(obj) == 0)
                throw std::domain_error("ce: local results cover different object sets");
    }

    // Co-association: fraction of local results grouping the pair together,
    // over those mentioning both (here: every local mentions every object).
    const std::size_t n = objects.size();
    std::vector<std::vector<double>> score(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            int together = 0;
            for (const auto& local : locals)
                if (local.partition.at(objects[i]) == local.partition.at(objects[j])) ++together;
            score[i][j] = score[j][i] =
                static_cast<double>(together) / static_cast<double>(locals.size());
        }

    GroupingResult best;
    double best_nmi = -2.0;
    for (int level = 1; level <= partition_param; ++level) {
        const double threshold = static_cast<double>(level) / (partition_param + 1);

        // Connected components of the thresholded co-association graph.
        std::vector<int> comp(n, -1);
        int ncomp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (comp[i] != -1) continue;
            std::vector<std::size_t> stack = {i};
            comp[i] = ncomp;
            while (!stack.empty()) {
                const std::size_t v = stack.back();
                stack.pop_back();
                for (std::size_t u = 0; u < n; ++u) {
                    if (comp[u] != -1 || score[v][u] < threshold) continue;
                    comp[u] = ncomp;
                    stack.push_back(u);
                }
            }
            ++ncomp;
        }

        GroupingResult candidate;
        for (std::size_t i = 0; i < n; ++i) candidate.partition[objects[i]] = comp[i];
        candidate.canonicalize();

        double mean = 0.0;
        for (const auto& local : locals) mean += normalized_mutual_information(candidate, local);
        mean /= static_cast<double>(locals.size());
        if (mean > best_nmi) {
            best_nmi = mean;
            best = candidate;
        }
    }
    return best;
}

} // namespace trajcomp
