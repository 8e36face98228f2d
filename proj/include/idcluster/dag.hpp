#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "idcluster/document.hpp"

namespace idcluster {

/// Edge to a shared node. A nonzero offset marks an offset edge: the child
/// occurrence it stands for has id (target id + offset), measured inside the
/// first occurrence of the edge's source node.
struct DagEdge {
    std::uint32_t target;  // node index
    std::int32_t offset;

    bool is_offset_edge() const { return offset != 0; }
    friend bool operator==(const DagEdge&, const DagEdge&) = default;
};

/// Document tree with identical subtrees merged.
///
/// Two nodes are identical when they have the same kind, label and direct
/// keyword set and pairwise identical children in the same order. Each DAG
/// node keeps the pre-order id of its first occurrence. Nodes are stored in
/// ascending id order, so index 0 is the document root.
class CompressedDag {
public:
    struct Node {
        NodeId id;
        NodeKind kind;
        KeywordId label;
        std::uint32_t occurrence_count;
        std::uint64_t kw_begin, kw_end;
        std::uint64_t edge_begin, edge_end;
    };

    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::uint32_t i) const { return nodes_[i]; }
    std::span<const KeywordId> keywords(std::uint32_t i) const {
        return {keywords_.data() + nodes_[i].kw_begin, keywords_.data() + nodes_[i].kw_end};
    }
    std::span<const DagEdge> children(std::uint32_t i) const {
        return {edges_.data() + nodes_[i].edge_begin, edges_.data() + nodes_[i].edge_end};
    }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t offset_edge_count() const;

    const Vocabulary& vocabulary() const { return vocab_; }
    NodeId document_size() const { return document_size_; }

    /// Node indices ordered so that every node precedes its children.
    std::vector<std::uint32_t> topological_order() const;

private:
    friend CompressedDag compress(const DocumentTree& doc);

    Vocabulary vocab_;
    std::vector<Node> nodes_;
    std::vector<KeywordId> keywords_;
    std::vector<DagEdge> edges_;
    NodeId document_size_ = 0;
};

/// Bottom-up hash-consing in one reverse pre-order pass.
CompressedDag compress(const DocumentTree& doc);

/// Expands shared nodes again, accumulating offsets along each path to
/// recover original ids. Throws std::logic_error if a recovered id disagrees
/// with the pre-order position it lands on.
DocumentTree unfold(const CompressedDag& dag);

}  // namespace idcluster
