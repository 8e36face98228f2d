#include "idcluster/id_list.hpp"

#include <algorithm>
#include <numeric>

namespace idcluster {

void IdListAccumulator::contain(KeywordId w, std::int32_t weight) {
    if (slot_of_[w] < 0) {
        slot_of_[w] = static_cast<std::int32_t>(touched_.size());
        touched_.push_back(w);
        if (lists_.size() < touched_.size()) {
            lists_.emplace_back();
            depths_.emplace_back();
        }
    }
    IdList& list = lists_[slot_of_[w]];
    auto& depth = depths_[slot_of_[w]];
    const auto cur_depth = static_cast<std::uint32_t>(path_.size() - 1);

    // Walk up from the last entry to the deepest one still on the current
    // path. Entries passed over are off the path for good, so this is
    // amortized constant per entry.
    std::int32_t anchor = list.empty() ? -1 : static_cast<std::int32_t>(list.size() - 1);
    while (anchor >= 0 && !(depth[anchor] <= cur_depth && path_[depth[anchor]] == list.ids[anchor]))
        anchor = list.pid_pos[anchor];

    std::uint32_t from = anchor < 0 ? 0 : depth[anchor] + 1;
    for (std::uint32_t d = from; d <= cur_depth; ++d) {
        list.ids.push_back(path_[d]);
        list.pid_pos.push_back(anchor);
        list.n_desc.push_back(0);
        depth.push_back(d);
        anchor = static_cast<std::int32_t>(list.size() - 1);
    }
    list.n_desc[anchor] += weight;
}

IdListAccumulator::Output IdListAccumulator::take() {
    std::vector<std::size_t> order(touched_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return touched_[a] < touched_[b]; });

    Output out;
    out.keywords.reserve(order.size());
    out.lists.reserve(order.size());
    for (std::size_t slot : order) {
        IdList& list = lists_[slot];
        for (std::size_t i = list.size(); i-- > 0;) {
            if (list.pid_pos[i] >= 0) list.n_desc[list.pid_pos[i]] += list.n_desc[i];
        }
        out.keywords.push_back(touched_[slot]);
        out.lists.push_back(std::move(list));
        list = IdList{};
        depths_[slot].clear();
        slot_of_[touched_[slot]] = -1;
    }
    touched_.clear();
    path_.clear();
    return out;
}

}  // namespace idcluster
