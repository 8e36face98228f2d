#pragma once

#include <string_view>
#include <vector>

#include "idcluster/document.hpp"
#include "idcluster/id_list.hpp"

namespace idcluster {

/// Baseline index: one IdList per keyword over the uncompressed tree.
class TreeIndex {
public:
    TreeIndex() = default;
    TreeIndex(Vocabulary vocab, std::vector<IdList> lists, NodeId node_count)
        : vocab_(std::move(vocab)), lists_(std::move(lists)), node_count_(node_count) {}

    /// Empty list for unknown or empty keywords.
    const IdList& lookup(std::string_view keyword) const;
    const IdList& list(KeywordId w) const { return lists_[w]; }

    const Vocabulary& vocabulary() const { return vocab_; }
    const std::vector<IdList>& lists() const { return lists_; }
    NodeId node_count() const { return node_count_; }
    std::size_t entry_count() const;

    friend bool operator==(const TreeIndex&, const TreeIndex&) = default;

private:
    Vocabulary vocab_;
    std::vector<IdList> lists_;
    NodeId node_count_ = 0;
};

/// Single pre-order pass over the document.
TreeIndex build_tree_index(const DocumentTree& doc);

inline const IdList& idlist_lookup(const TreeIndex& index, std::string_view keyword) {
    return index.lookup(keyword);
}

}  // namespace idcluster
