#include "trajcomp/huffman.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace trajcomp {
namespace {

struct TreeNode {
    std::uint64_t freq;
    std::uint32_t tie;   // leaves: symbol id; internal: 0x10000 + birth order
    int left = -1;
    int right = -1;
    Symbol symbol = 0;
};

struct NodeOrder {
    const std::vector<TreeNode>* nodes;
    bool operator()(int a, int b) const {
        const TreeNode& na = (*nodes)[a];
        const TreeNode& nb = (*nodes)[b];
        if (na.freq != nb.freq) return na.freq > nb.freq;
        return na.tie > nb.tie;
    }
};

void collect_depths(const std::vector<TreeNode>& nodes, int idx, int depth,
                    std::map<Symbol, std::uint8_t>& lengths) {
    const TreeNode& node = nodes[idx];
    if (node.left < 0) {
        lengths[node.symbol] = static_cast<std::uint8_t>(std::max(depth, 1));
        return;
    }
    collect_depths(nodes, node.left, depth + 1, lengths);
    collect_depths(nodes, node.right, depth + 1, lengths);
}

} // namespace

HuffmanTable HuffmanTable::from_frequencies(const std::map<Symbol, std::uint64_t>& freqs) {
    std::vector<TreeNode> nodes;
    std::priority_queue<int, std::vector<int>, NodeOrder> queue{NodeOrder{&nodes}};
    // Reserve so the comparator's pointer into `nodes` stays valid while
    // the queue is in use.
    nodes.reserve(freqs.size() * 2 + 1);
    for (const auto& [s, f] : freqs) {
        if (f == 0) continue;
        nodes.push_back(TreeNode{f, s, -1, -1, s});
        queue.push(static_cast<int>(nodes.size()) - 1);
    }
    if (nodes.empty()) throw std::domain_error("huffman: no symbols");

    std::uint32_t birth = 0;
    while (queue.size() > 1) {
        const int a = queue.top();
        queue.pop();
        const int b = queue.top();
        queue.pop();
        nodes.push_back(TreeNode{nodes[a].freq + nodes[b].freq, 0x10000u + birth++, a, b, 0});
        queue.push(static_cast<int>(nodes.size()) - 1);
    }

    HuffmanTable table;
    collect_depths(nodes, queue.top(), 0, table.lengths_);
    table.build_codes();
    return table;
}

HuffmanTable HuffmanTable::from_symbols(std::span<const Symbol> seq) {
    if (seq.empty()) throw std::domain_error("huffman: empty sequence");
    std::map<Symbol, std::uint64_t> freqs;
    for (Symbol s : seq) freqs[s] += 1;
    return from_frequencies(freqs);
}

void HuffmanTable::build_codes() {
    int max_len = 0;
    for (const auto& [s, len] : lengths_) max_len = std::max(max_len, static_cast<int>(len));

    std::vector<std::uint32_t> count(max_len + 1, 0);
    for (const auto& [s, len] : lengths_) count[len] += 1;

    first_code_.assign(max_len + 1, 0);
    first_index_.assign(max_len + 1, 0);
    std::uint32_t code = 0;
    std::uint32_t index = 0;
    for (int len = 1; len <= max_len; ++len) {
        first_code_[len] = code;
        first_index_[len] = index;
        code = (code + count[len]) << 1;
        index += count[len];
    }

    // lengths_ iterates by symbol id; codes must follow (length, symbol).
    symbols_by_code_.assign(index, 0);
    std::vector<std::uint32_t> next = first_code_;
    std::vector<std::uint32_t> slot = first_index_;
    for (int len = 1; len <= max_len; ++len) {
        for (const auto& [s, l] : lengths_) {
            if (l != len) continue;
            codes_[s] = next[len]++;
            symbols_by_code_[slot[len]++] = s;
        }
    }
}

std::uint32_t HuffmanTable::code_of(Symbol s) const {
    const auto it = codes_.find(s);
    if (it == codes_.end()) throw std::domain_error("huffman: symbol not in table");
    return it->second;
}

std::uint8_t HuffmanTable::length_of(Symbol s) const {
    const auto it = lengths_.find(s);
    if (it == lengths_.end()) throw std::domain_error("huffman: symbol not in table");
    return it->second;
}

void HuffmanTable::encode(std::span<const Symbol> seq, BitWriter& out) const {
    for (Symbol s : seq) out.put_bits(code_of(s), length_of(s));
}

Symbol HuffmanTable::decode_one(BitReader& in) const {
    std::uint32_t code = 0;
    for (std::size_t len = 1; len < first_code_.size(); ++len) {
        code = (code << 1) | in.get_bit();
        const std::uint32_t span = (len + 1 < first_code_.size())
                                       ? first_index_[len + 1] - first_index_[len]
                                       : static_cast<std::uint32_t>(symbols_by_code_.size()) -
                                             first_index_[len];
        if (code >= first_code_[len] && code - first_code_[len] < span)
            return symbols_by_code_[first_index_[len] + (code - first_code_[len])];
    }
    throw std::runtime_error("huffman: invalid codeword");
}

std::vector<Symbol> HuffmanTable::decode(BitReader& in, std::size_t count) const {
    std::vector<Symbol> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(decode_one(in));
    return out;
}

void HuffmanTable::serialize(std::ostream& out) const {
    out << "HUF " << lengths_.size() << "\n";
    for (const auto& [s, len] : lengths_) out << s << " " << static_cast<int>(len) << "\n";
}

HuffmanTable HuffmanTable::parse(std::istream& in) {
    std::string tag;
    std::size_t count = 0;
    in >> tag >> count;
    if (!in || tag != "HUF") throw std::runtime_error("huffman: bad table header");
    HuffmanTable table;
    for (std::size_t i = 0; i < count; ++i) {
        unsigned sym, len;
        in >> sym >> len;
        if (!in || len == 0 || len > 64) throw std::runtime_error("huffman: bad table entry");
        table.lengths_[static_cast<Symbol>(sym)] = static_cast<std::uint8_t>(len);
    }
    table.build_codes();
    return table;
}

std::size_t HuffmanTable::serialized_bytes() const {
    // Compact wire form: 2-byte entry count, then (symbol, length) as
    // 2 + 1 bytes per entry.
    return 2 + 3 * lengths_.size();
}

HuffmanEncoded huffman_encode(std::span<const Symbol> seq) {
    HuffmanEncoded out;
    out.table = HuffmanTable::from_symbols(seq);
    BitWriter writer;
    out.table.encode(seq, writer);
    out.bytes = writer.bytes();
    out.bit_count = writer.bit_count();
    return out;
}

std::vector<Symbol> huffman_decode(const HuffmanTable& table,
                                   std::span<const std::uint8_t> bytes, std::size_t bit_count) {
    BitReader reader(bytes, bit_count);
    std::vector<Symbol> out;
    while (reader.remaining() > 0) out.push_back(table.decode_one(reader));
    return out;
}

double compression_ratio(double raw_bytes, double compressed_bytes) {
    if (compressed_bytes <= 0) throw std::domain_error("ratio: compressed size must be positive");
    return raw_bytes / compressed_bytes;
}

} // namespace trajcomp
