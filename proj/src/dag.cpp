#include "idcluster/dag.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace idcluster {

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : key) {
            h ^= v;
            h *= 1099511628211ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

std::size_t CompressedDag::offset_edge_count() const {
    return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [](const DagEdge& e) { return e.is_offset_edge(); }));
}

std::vector<std::uint32_t> CompressedDag::topological_order() const {
    // Reverse DFS post-order from the root.
    std::vector<std::uint32_t> post;
    post.reserve(nodes_.size());
    if (nodes_.empty()) return post;
    std::vector<bool> seen(nodes_.size(), false);
    struct Frame {
        std::uint32_t node;
        std::uint64_t next;
    };
    std::vector<Frame> stack{{0, nodes_[0].edge_begin}};
    seen[0] = true;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < nodes_[f.node].edge_end) {
            std::uint32_t t = edges_[f.next++].target;
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back({t, nodes_[t].edge_begin});
            }
        } else {
            post.push_back(f.node);
            stack.pop_back();
        }
    }
    std::reverse(post.begin(), post.end());
    return post;
}

CompressedDag compress(const DocumentTree& doc) {
    const NodeId n = doc.size();
    std::vector<std::uint32_t> class_of(static_cast<std::size_t>(n) + 1);
    std::vector<NodeId> rep;                 // first occurrence per class
    std::vector<std::uint32_t> count;        // occurrences per class
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> classes;

    // Children are classified before their parents. The unordered_map compares
    // keys in full, so hash collisions never merge distinct subtrees.
    std::vector<std::uint32_t> key;
    for (NodeId x = n; x >= 1; --x) {
        key.clear();
        key.push_back(static_cast<std::uint32_t>(doc.kind(x)));
        key.push_back(doc.label_id(x));
        auto kws = doc.keywords(x);
        key.push_back(static_cast<std::uint32_t>(kws.size()));
        key.insert(key.end(), kws.begin(), kws.end());
        for (NodeId c = x + 1; c < doc.subtree_end(x); c = doc.subtree_end(c)) key.push_back(class_of[c]);

        auto [it, inserted] = classes.try_emplace(key, static_cast<std::uint32_t>(rep.size()));
        if (inserted) {
            rep.push_back(x);
            count.push_back(1);
        } else {
            rep[it->second] = x;  // reverse pass: x is the earliest occurrence so far
            ++count[it->second];
        }
        class_of[x] = it->second;
    }
    classes.clear();

    // Order classes by first occurrence.
    std::vector<std::uint32_t> order(rep.size());
    for (std::uint32_t c = 0; c < order.size(); ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return rep[a] < rep[b]; });
    std::vector<std::uint32_t> index_of(rep.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) index_of[order[i]] = i;

    CompressedDag dag;
    dag.vocab_ = doc.vocabulary();
    dag.document_size_ = n;
    dag.nodes_.reserve(order.size());
    for (std::uint32_t c : order) {
        NodeId x = rep[c];
        CompressedDag::Node node{};
        node.id = x;
        node.kind = doc.kind(x);
        node.label = doc.label_id(x);
        node.occurrence_count = count[c];
        auto kws = doc.keywords(x);
        node.kw_begin = dag.keywords_.size();
        dag.keywords_.insert(dag.keywords_.end(), kws.begin(), kws.end());
        node.kw_end = dag.keywords_.size();
        node.edge_begin = dag.edges_.size();
        for (NodeId ch = x + 1; ch < doc.subtree_end(x); ch = doc.subtree_end(ch)) {
            std::uint32_t cc = class_of[ch];
            dag.edges_.push_back({index_of[cc], ch - rep[cc]});
        }
        node.edge_end = dag.edges_.size();
        dag.nodes_.push_back(node);
    }
    return dag;
}

DocumentTree unfold(const CompressedDag& dag) {
    DocumentBuilder b;
    if (dag.size() == 0) return b.finish();
    struct Frame {
        std::uint32_t node;
        std::int64_t offset;  // accumulated along the path
        std::uint64_t next_edge;
    };
    auto emit = [&](std::uint32_t i, std::int64_t offset) {
        const auto& nd = dag.node(i);
        NodeId id = b.open(nd.kind, dag.vocabulary().word(nd.label));
        if (static_cast<std::int64_t>(nd.id) + offset != id)
            throw std::logic_error("unfold: offset arithmetic gives id " + std::to_string(nd.id + offset) +
                                   " at pre-order position " + std::to_string(id));
        for (KeywordId w : dag.keywords(i)) b.keyword(dag.vocabulary().word(w));
    };
    std::vector<Frame> stack;
    emit(0, 0);
    stack.push_back({0, 0, dag.node(0).edge_begin});
    while (!stack.empty()) {
        Frame& f = stack.back();
        auto edges = dag.children(f.node);
        std::uint64_t k = f.next_edge - dag.node(f.node).edge_begin;
        if (k < edges.size()) {
            ++f.next_edge;
            const DagEdge e = edges[k];
            std::int64_t off = f.offset + e.offset;
            emit(e.target, off);
            stack.push_back({e.target, off, dag.node(e.target).edge_begin});
        } else {
            b.close();
            stack.pop_back();
        }
    }
    return b.finish();
}

}  // namespace idcluster
