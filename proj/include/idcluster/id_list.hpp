#pragma once

#include <cstdint>
#include <vector>

#include "idcluster/document.hpp"

namespace idcluster {

/// Inverted list of the nodes containing one keyword, sorted by id.
///
/// Three parallel arrays: the node id, the position of the node's parent in
/// this same list (-1 for the list's topmost entry), and the number of nodes
/// in the node's subtree that directly contain the keyword.
struct IdList {
    std::vector<NodeId> ids;
    std::vector<std::int32_t> pid_pos;
    std::vector<std::int32_t> n_desc;

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }

    friend bool operator==(const IdList&, const IdList&) = default;
};

/// Builds ancestor-closed IdLists from a pre-order stream of nodes.
///
/// Call enter() for every node in pre-order with its depth, then contain()
/// for the keywords the node contributes. A node is only materialized in a
/// list once something at or below it contains the keyword, so each list
/// receives exactly the ancestors-or-self of its contributing nodes.
///
/// Only keywords actually touched cost anything, so one accumulator can be
/// reused for many small trees via take().
class IdListAccumulator {
public:
    explicit IdListAccumulator(std::size_t keyword_count) : slot_of_(keyword_count, -1) {}

    void enter(NodeId id, std::uint32_t depth) {
        path_.resize(depth);
        path_.push_back(id);
    }

    /// The most recently entered node directly contains `w`, `weight` times.
    void contain(KeywordId w, std::int32_t weight = 1);

    struct Output {
        std::vector<KeywordId> keywords;  // ascending
        std::vector<IdList> lists;        // parallel to keywords
    };

    /// Finalizes n_desc (subtree sums), returns the lists and resets.
    Output take();

private:
    std::vector<NodeId> path_;
    std::vector<std::int32_t> slot_of_;
    std::vector<KeywordId> touched_;
    std::vector<IdList> lists_;
    std::vector<std::vector<std::uint32_t>> depths_;
};

}  // namespace idcluster
