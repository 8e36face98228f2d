#include "idcluster/dag_search.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <stdexcept>
#include <functional>

namespace idcluster {

namespace {

std::optional<std::vector<KeywordId>> resolve_keywords(const IdCluster& cluster, std::span<const std::string> keywords) {
    std::vector<KeywordId> ids;
    for (const auto& k : normalize_keywords(keywords)) {
        auto w = cluster.vocabulary().find(k);
        if (!w) return std::nullopt;
        ids.push_back(*w);
    }
    return ids;
}

// The component's lists for the query, shortest first; empty if some keyword
// does not occur in the component.
std::vector<const IdList*> component_lists(const RedundancyComponent& rc, std::span<const KeywordId> keywords) {
    std::vector<const IdList*> lists;
    lists.reserve(keywords.size());
    for (KeywordId w : keywords) {
        const IdList* l = rc.find(w);
        if (l == nullptr) return {};
        lists.push_back(l);
    }
    // insertion sort: stable, and no temporary buffer for the usual 1-4 lists
    for (std::size_t i = 1; i < lists.size(); ++i)
        for (std::size_t j = i; j > 0 && lists[j]->size() < lists[j - 1]->size(); --j) std::swap(lists[j], lists[j - 1]);
    return lists;
}

}  // namespace

ResultSet dag_search(const IdCluster& cluster, std::span<const std::string> keywords, Semantics sem, Algorithm inner,
                     DagSearchStats* stats) {
    auto query = resolve_keywords(cluster, keywords);
    if (!query || cluster.components().empty()) return {};

    // state[c]: kUnseen, kSelf (searched; the only result is the root, so a
    // dummy expands to itself) or an index into `cache`, which holds each
    // searched component's expanded results in its own id frame.
    constexpr std::int32_t kUnseen = -1, kSelf = -2, kBusy = -3;
    std::vector<std::int32_t> state(cluster.components().size(), kUnseen);
    std::vector<ResultSet> cache;

    struct Ref {
        std::int32_t comp;  // -1: not a dummy
        std::int32_t offset;
    };
    // refs of every open expansion, stacked; each level truncates back
    std::vector<Ref> refs;
    std::vector<std::int64_t> slots;  // scratch, used before recursing

    // Recursion depth is the component nesting depth, which is O(sqrt(N)):
    // each level down needs a strictly larger occurrence count.
    auto expand = [&](auto& self, std::uint32_t comp) -> void {
        state[comp] = kBusy;
        const RedundancyComponent& rc = cluster.component(comp);
        auto lists = component_lists(rc, *query);
        ResultSet local = lists.empty() ? ResultSet{} : run_kernel(lists, sem, inner);
        if (stats) {
            ++stats->searches[comp];
            for (NodeId id : local) stats->local_member_results += cluster.is_dummy(comp, id) ? 0 : 1;
        }
        // The component root can carry the same id as the dummy that points
        // here, so it must never be looked up in the RCPM. As SLCA the root
        // is the only result and nothing needs expanding; as ELCA it comes
        // first (smallest id) and is skipped.
        std::size_t first = 0;
        if (!local.empty() && local.front() == rc.root) {
            if (sem == Semantics::Slca || local.size() == 1) {
                state[comp] = kSelf;
                return;
            }
            first = 1;
        }

        // Resolve all dummies: RCPM positions first (sequential bitset
        // reads), then the scattered component numbers, prefetched ahead.
        const std::size_t base = refs.size();
        refs.resize(base + local.size(), Ref{-1, 0});
        slots.resize(local.size());
        for (std::size_t i = first; i < local.size(); ++i) slots[i] = cluster.rcpm_index(local[i]);
        std::size_t dummies = 0;
        constexpr std::size_t kAhead = 32;
        for (std::size_t i = first; i < local.size(); ++i) {
            if (i + kAhead < local.size() && slots[i + kAhead] >= 0)
                __builtin_prefetch(cluster.rcpm_component_at(slots[i + kAhead]));
            if (slots[i] < 0) continue;
            const std::uint32_t c = *cluster.rcpm_component_at(slots[i]);
            refs[base + i] = Ref{static_cast<std::int32_t>(c), local[i] - cluster.component(c).root};
            ++dummies;
        }
        if (dummies == 0) {
            refs.resize(base);
            state[comp] = static_cast<std::int32_t>(cache.size());
            cache.push_back(std::move(local));
            return;
        }
        for (std::size_t i = first; i < local.size() && dummies > 0; ++i) {
            const std::int32_t c = refs[base + i].comp;
            if (c < 0) continue;
            --dummies;
            if (state[c] == kUnseen) self(self, static_cast<std::uint32_t>(c));
            if (state[c] == kBusy) throw std::logic_error("cyclic component reference");
        }

        // A dummy's expansion stays inside its subtree's id range, so
        // expanding in place keeps the results ascending.
        ResultSet out;
        out.reserve(local.size());
        for (std::size_t i = 0; i < local.size(); ++i) {
            const Ref r = refs[base + i];
            const std::int32_t st = r.comp < 0 ? kSelf : state[r.comp];
            if (st == kSelf) {
                out.push_back(local[i]);  // a real node, or root + offset == dummy id
            } else {
                for (NodeId n : cache[st]) out.push_back(n + r.offset);
            }
        }
        refs.resize(base);
        state[comp] = static_cast<std::int32_t>(cache.size());
        cache.push_back(std::move(out));
    };
    expand(expand, 0);
    if (state[0] == kSelf) return {cluster.component(0).root};

    ResultSet out = std::move(cache[state[0]]);
    assert(std::adjacent_find(out.begin(), out.end(), std::greater_equal<>()) == out.end());
    return out;
}

std::size_t dag_common_ancestor_count(const IdCluster& cluster, std::span<const std::string> keywords) {
    auto query = resolve_keywords(cluster, keywords);
    if (!query || cluster.components().empty()) return 0;
    std::vector<bool> seen(cluster.components().size(), false);
    std::vector<std::uint32_t> todo{0};
    seen[0] = true;
    std::size_t count = 0;
    while (!todo.empty()) {
        std::uint32_t c = todo.back();
        todo.pop_back();
        auto lists = component_lists(cluster.component(c), *query);
        if (lists.empty()) continue;
        CursorSet cur(lists);
        while (auto id = fwd_get_ca(cur)) {
            if (cluster.is_dummy(c, *id)) {
                auto nested = cluster.rcpm_find(*id)->component;
                if (!seen[nested]) {
                    seen[nested] = true;
                    todo.push_back(nested);
                }
            } else {
                ++count;
            }
            cur.advance();
        }
    }
    return count;
}

}  // namespace idcluster
