#include "idcluster/tree_index.hpp"

namespace idcluster {

namespace {
const IdList kEmptyList{};
}

const IdList& TreeIndex::lookup(std::string_view keyword) const {
    if (keyword.empty()) return kEmptyList;
    auto w = vocab_.find(keyword);
    return w ? lists_[*w] : kEmptyList;
}

std::size_t TreeIndex::entry_count() const {
    std::size_t total = 0;
    for (const auto& l : lists_) total += l.size();
    return total;
}

TreeIndex build_tree_index(const DocumentTree& doc) {
    IdListAccumulator acc(doc.vocabulary().size());
    std::vector<NodeId> path;
    for (NodeId n = 1; n <= doc.size(); ++n) {
        while (!path.empty() && path.back() != doc.parent(n)) path.pop_back();
        acc.enter(n, static_cast<std::uint32_t>(path.size()));
        path.push_back(n);
        for (KeywordId w : doc.keywords(n)) acc.contain(w);
    }
    auto built = acc.take();
    std::vector<IdList> lists(doc.vocabulary().size());
    for (std::size_t i = 0; i < built.keywords.size(); ++i) lists[built.keywords[i]] = std::move(built.lists[i]);
    return TreeIndex(doc.vocabulary(), std::move(lists), doc.size());
}

}  // namespace idcluster
