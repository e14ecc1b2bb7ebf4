#include "trajcomp/pst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trajcomp {
namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

PatternTree PatternTree::learn(const std::vector<Symbol>& sequence, std::uint32_t alphabet_size,
                               const PstParams& params) {
    return learn(std::vector<std::vector<Symbol>>{sequence}, alphabet_size, params);
}

PatternTree PatternTree::learn(const std::vector<std::vector<Symbol>>& training,
                               std::uint32_t alphabet_size, const PstParams& params) {
    if (params.p_min <= 0 || params.p_min > 1)
        throw std::domain_error("pst: p_min must be in (0,1]");
    if (params.l_max < 0) throw std::domain_error("pst: l_max must be >= 0");
    if (params.gamma < 0 || params.gamma * alphabet_size >= 1)
        throw std::domain_error("pst: gamma*alphabet must be < 1");

    std::size_t total_items = 0;
    for (const auto& seq : training) {
        total_items += seq.size();
        for (Symbol s : seq)
            if (s >= alphabet_size) throw std::domain_error("pst: symbol outside alphabet");
    }
    if (total_items == 0) throw std::domain_error("pst: empty training data");

    PatternTree tree(alphabet_size, params);

    // Window and successor counts for every substring up to l_max.
    std::map<Context, Node> counts;
    for (const auto& seq : training) {
        for (int len = 0; len <= params.l_max; ++len) {
            if (seq.size() < static_cast<std::size_t>(len)) break;
            for (std::size_t i = 0; i + len <= seq.size(); ++i) {
                Context c(seq.begin() + i, seq.begin() + i + len);
                Node& node = counts[c];
                node.occurrences += 1;
                if (i + len < seq.size()) {
                    node.next_counts[seq[i + len]] += 1;
                    node.next_total += 1;
                }
            }
        }
    }

    // Keep significant contexts, growing by length so the result stays
    // suffix-closed: a context is admitted only if the context obtained by
    // dropping its oldest symbol is already present.
    for (int len = 0; len <= params.l_max; ++len) {
        for (auto& [ctx, node] : counts) {
            if (ctx.size() != static_cast<std::size_t>(len)) continue;
            std::size_t windows = 0;
            for (const auto& seq : training)
                if (seq.size() + 1 > ctx.size()) windows += seq.size() - ctx.size() + 1;
            node.significance = windows == 0 ? 0.0
                                             : static_cast<double>(node.occurrences) /
                                                   static_cast<double>(windows);
            if (ctx.empty()) {
                node.significance = 1.0;
                tree.nodes_.emplace(ctx, node);
                continue;
            }
            if (node.significance < params.p_min) continue;
            Context parent(ctx.begin() + 1, ctx.end());
            if (tree.nodes_.count(parent) == 0) continue;
            tree.nodes_.emplace(ctx, node);
        }
    }
    return tree;
}

const PatternTree::Node& PatternTree::lookup(std::span<const Symbol> context) const {
    const std::size_t max_len =
        std::min(context.size(), static_cast<std::size_t>(params_.l_max));
    for (std::size_t len = max_len; len > 0; --len) {
        Context c(context.end() - len, context.end());
        auto it = nodes_.find(c);
        if (it != nodes_.end()) return it->second;
    }
    return nodes_.at(Context{});
}

double PatternTree::smoothed(const Node& node, Symbol next) const {
    if (node.next_total == 0) return 1.0 / alphabet_size_;
    const auto it = node.next_counts.find(next);
    const double raw = it == node.next_counts.end()
                           ? 0.0
                           : static_cast<double>(it->second) /
                                 static_cast<double>(node.next_total);
    return (1.0 - alphabet_size_ * params_.gamma) * raw + params_.gamma;
}

double PatternTree::predict(std::span<const Symbol> context, Symbol next) const {
    if (next >= alphabet_size_) throw std::domain_error("pst: symbol outside alphabet");
    return smoothed(lookup(context), next);
}

Symbol PatternTree::predict_next(std::span<const Symbol> context) const {
    const Node& node = lookup(context);
    if (node.next_total == 0) return 0;
    Symbol best = 0;
    std::uint64_t best_count = 0;
    for (const auto& [sym, count] : node.next_counts) {
        if (count > best_count) {
            best = sym;
            best_count = count;
        }
    }
    return best;
}

double PatternTree::significance(const Context& c) const {
    const auto it = nodes_.find(c);
    return it == nodes_.end() ? 0.0 : it->second.significance;
}

bool PatternTree::equal_nodes(const PatternTree& other) const {
    if (nodes_.size() != other.nodes_.size()) return false;
    auto a = nodes_.begin();
    auto b = other.nodes_.begin();
    for (; a != nodes_.end(); ++a, ++b) {
        if (a->first != b->first) return false;
        if (a->second.next_counts != b->second.next_counts) return false;
        if (a->second.occurrences != b->second.occurrences) return false;
    }
    return true;
}

void PatternTree::serialize(std::ostream& out) const {
    out << "PST 1\n";
    out << "alphabet " << alphabet_size_ << "\n";
    out << "params " << format_double(params_.p_min) << " " << params_.l_max << " "
        << format_double(params_.gamma) << "\n";
    out << "contexts " << nodes_.size() << "\n";
    for (const auto& [ctx, node] : nodes_) {
        out << "ctx " << ctx.size();
        for (Symbol s : ctx) out << " " << s;
        out << " occ " << node.occurrences << " sig " << format_double(node.significance)
            << " next " << node.next_counts.size();
        for (const auto& [sym, count] : node.next_counts) out << " " << sym << ":" << count;
        out << "\n";
    }
}

PatternTree PatternTree::parse(std::istream& in) {
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (!in || tag != "PST" || version != 1) throw std::runtime_error("pst: bad model header");

    std::uint32_t alphabet = 0;
    PstParams params;
    std::size_t context_count = 0;
    in >> tag >> alphabet;
    if (!in || tag != "alphabet") throw std::runtime_error("pst: bad alphabet line");
    in >> tag >> params.p_min >> params.l_max >> params.gamma;
    if (!in || tag != "params") throw std::runtime_error("pst: bad params line");
    in >> tag >> context_count;
    if (!in || tag != "contexts") throw std::runtime_error("pst: bad contexts line");

    PatternTree tree(alphabet, params);
    for (std::size_t i = 0; i < context_count; ++i) {
        std::size_t ctx_len = 0;
        in >> tag >> ctx_len;
        if (!in || tag != "ctx") throw std::runtime_error("pst: bad ctx line");
        Context ctx(ctx_len);
        for (auto& s : ctx) {
            unsigned v;
            in >> v;
            s = static_cast<Symbol>(v);
        }
        Node node;
        in >> tag >> node.occurrences;
        if (!in || tag != "occ") throw std::runtime_error("pst: bad occ field");
        in >> tag >> node.significance;
        if (!in || tag != "sig") throw std::runtime_error("pst: bad sig field");
        std::size_t next_count = 0;
        in >> tag >> next_count;
        if (!in || tag != "next") throw std::runtime_error("pst: bad next field");
        for (std::size_t k = 0; k < next_count; ++k) {
            std::string pair;
            in >> pair;
            const auto colon = pair.find(':');
            if (colon == std::string::npos) throw std::runtime_error("pst: bad count pair");
            const Symbol sym = static_cast<Symbol>(std::stoul(pair.substr(0, colon)));
            const std::uint64_t count = std::stoull(pair.substr(colon + 1));
            node.next_counts[sym] = count;
            node.next_total += count;
        }
        tree.nodes_.emplace(std::move(ctx), std::move(node));
    }
    if (!in) throw std::runtime_error("pst: truncated model");
    if (tree.nodes_.count(Context{}) == 0) throw std::runtime_error("pst: missing root context");
    return tree;
}

std::uint64_t PatternTree::digest() const {
    std::ostringstream bytes;
    serialize(bytes);
    const std::string s = bytes.str();
    return fnv1a64(std::span<const char>(s.data(), s.size()));
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace trajcomp
