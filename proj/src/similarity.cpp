#include "trajcomp/similarity.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace trajcomp {
namespace {

// L1 distance between the two trees' smoothed next-symbol distributions at
// one context. Works on the sparse counts; symbols unseen by both trees
// contribute zero (or a closed-form term when one side is uniform).
double l1_at_context(const PatternTree& t1, const PatternTree& t2,
                     const PatternTree::Context& ctx) {
    const auto& n1 = t1.lookup(ctx);
    const auto& n2 = t2.lookup(ctx);
    const double a = static_cast<double>(t1.alphabet_size());

    auto prob = [&](const PatternTree::Node& node, const PatternTree& tree, Symbol s) {
        if (node.next_total == 0) return 1.0 / a;
        const auto it = node.next_counts.find(s);
        const double raw = it == node.next_counts.end()
                               ? 0.0
                               : static_cast<double>(it->second) /
                                     static_cast<double>(node.next_total);
        return (1.0 - a * tree.params().gamma) * raw + tree.params().gamma;
    };

    std::set<Symbol> support;
    for (const auto& [s, c] : n1.next_counts) support.insert(s);
    for (const auto& [s, c] : n2.next_counts) support.insert(s);

    double l1 = 0.0;
    for (Symbol s : support) l1 += std::abs(prob(n1, t1, s) - prob(n2, t2, s));

    // Off-support mass: both sides are flat there.
    const double off1 = n1.next_total == 0 ? 1.0 / a : t1.params().gamma;
    const double off2 = n2.next_total == 0 ? 1.0 / a : t2.params().gamma;
    l1 += (a - static_cast<double>(support.size())) * std::abs(off1 - off2);
    return l1;
}

} // namespace

double simp_score(const PatternTree& t1, const PatternTree& t2, double d_min) {
    if (t1.alphabet_size() != t2.alphabet_size())
        throw std::domain_error("simp: trees use different alphabets");
    if (d_min <= 0) throw std::domain_error("simp: d_min must be positive");

    std::set<PatternTree::Context> patterns;
    for (const auto& [ctx, node] : t1.nodes()) patterns.insert(ctx);
    for (const auto& [ctx, node] : t2.nodes()) patterns.insert(ctx);

    double weighted = 0.0;
    double weight_sum = 0.0;
    for (const auto& ctx : patterns) {
        const double w = 0.5 * (t1.significance(ctx) + t2.significance(ctx));
        if (w <= 0) continue;
        weighted += w * l1_at_context(t1, t2, ctx);
        weight_sum += w;
    }
    const double d = weight_sum == 0 ? 0.0 : weighted / weight_sum;
    return -std::log(std::max(d, d_min));
}

SimilarityGraph build_similarity_graph(const std::map<ObjectId, PatternTree>& trees,
                                       double sim_theta) {
    if (trees.empty()) throw std::domain_error("similarity graph: no objects");
    SimilarityGraph g;
    for (const auto& [id, tree] : trees) g.vertices.push_back(id);
    for (auto a = trees.begin(); a != trees.end(); ++a) {
        auto b = a;
        for (++b; b != trees.end(); ++b) {
            if (simp_score(a->second, b->second) >= sim_theta)
                g.edges.emplace(a->first, b->first);
        }
    }
    return g;
}

} // namespace trajcomp
