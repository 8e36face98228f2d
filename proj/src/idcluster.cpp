#include "idcluster/idcluster.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace idcluster {

const IdList* RedundancyComponent::find(KeywordId w) const {
    auto it = std::lower_bound(keywords.begin(), keywords.end(), w);
    if (it == keywords.end() || *it != w) return nullptr;
    return &lists[static_cast<std::size_t>(it - keywords.begin())];
}

std::size_t RedundancyComponent::entry_count() const {
    std::size_t total = 0;
    for (const auto& l : lists) total += l.size();
    return total;
}

IdCluster::IdCluster(Vocabulary vocab, std::vector<RedundancyComponent> components, std::vector<RcpmEntry> rcpm,
                     NodeId node_count)
    : vocab_(std::move(vocab)),
      components_(std::move(components)),
      rcpm_(std::move(rcpm)),
      rcpm_bits_(static_cast<std::size_t>(node_count) / 64 + 1, 0),
      rcpm_rank_(rcpm_bits_.size(), 0),
      node_count_(node_count) {
    rcpm_component_.reserve(rcpm_.size());
    for (std::size_t i = 0; i < rcpm_.size(); ++i) {
        const auto& e = rcpm_[i];
        if (e.dummy_id <= 0 || e.dummy_id > node_count_) throw std::invalid_argument("RCPM dummy id out of range");
        if (e.component >= components_.size()) throw std::invalid_argument("RCPM points to unknown component");
        if (i > 0 && rcpm_[i - 1].dummy_id >= e.dummy_id) throw std::invalid_argument("RCPM not strictly sorted");
        if (e.offset != e.dummy_id - components_[e.component].root)
            throw std::invalid_argument("RCPM offset disagrees with the component root");
        rcpm_bits_[e.dummy_id >> 6] |= std::uint64_t(1) << (e.dummy_id & 63);
        rcpm_component_.push_back(e.component);
    }
    std::uint32_t rank = 0;
    for (std::size_t w = 0; w < rcpm_bits_.size(); ++w) {
        rcpm_rank_[w] = rank;
        rank += static_cast<std::uint32_t>(std::popcount(rcpm_bits_[w]));
    }
}

std::size_t IdCluster::entry_count() const {
    std::size_t total = 0;
    for (const auto& c : components_) total += c.entry_count();
    return total;
}

std::size_t IdCluster::dummy_entry_count() const {
    std::size_t total = 0;
    for (std::uint32_t c = 0; c < components_.size(); ++c)
        for (const auto& l : components_[c].lists)
            for (NodeId id : l.ids) total += is_dummy(c, id) ? 1 : 0;
    return total;
}

IdCluster build_idcluster(const CompressedDag& dag) {
    const auto m = static_cast<std::uint32_t>(dag.size());
    if (m == 0) return {};

    // A node whose count equals its parent's occurs exactly once inside each
    // occurrence of that parent and nowhere else, so it has exactly one such
    // parent, reached through a plain edge. Components are therefore trees.
    std::vector<std::int64_t> same_parent(m, -1);
    for (std::uint32_t i = 0; i < m; ++i) {
        for (const DagEdge& e : dag.children(i)) {
            if (dag.node(e.target).occurrence_count != dag.node(i).occurrence_count) continue;
            if (same_parent[e.target] >= 0 || e.is_offset_edge())
                throw std::logic_error("inconsistent occurrence counts in DAG");
            same_parent[e.target] = i;
        }
    }
    // Index order is first-occurrence order, so a component root precedes
    // its members and components come out numbered by root id.
    std::vector<std::uint32_t> comp_of(m);
    std::vector<std::uint32_t> comp_root;  // node index per component
    for (std::uint32_t i = 0; i < m; ++i) {
        if (same_parent[i] >= 0) {
            comp_of[i] = comp_of[same_parent[i]];
        } else {
            comp_of[i] = static_cast<std::uint32_t>(comp_root.size());
            comp_root.push_back(i);
        }
    }
    const auto comp_count = comp_root.size();

    // Nested components must be finished before the components that
    // reference them: walk roots in reverse topological order.
    std::vector<std::uint32_t> topo_pos(m);
    {
        auto topo = dag.topological_order();
        for (std::uint32_t k = 0; k < topo.size(); ++k) topo_pos[topo[k]] = k;
    }
    std::vector<std::uint32_t> comp_order(comp_count);
    for (std::uint32_t c = 0; c < comp_count; ++c) comp_order[c] = c;
    std::sort(comp_order.begin(), comp_order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return topo_pos[comp_root[a]] > topo_pos[comp_root[b]]; });

    const std::size_t vocab_size = dag.vocabulary().size();
    std::vector<RedundancyComponent> comps(comp_count);
    // Per component: (keyword, number of direct holders in one unfolded occurrence).
    std::vector<std::vector<std::pair<KeywordId, std::int32_t>>> contained(comp_count);
    std::vector<RcpmEntry> rcpm;

    IdListAccumulator acc(vocab_size);
    std::vector<std::int64_t> tally(vocab_size, 0);
    std::vector<KeywordId> touched;
    auto add = [&](KeywordId w, std::int32_t n) {
        if (tally[w] == 0) touched.push_back(w);
        tally[w] += n;
    };

    struct Frame {
        std::uint32_t node;
        std::uint32_t depth;
        std::uint64_t next;  // edge cursor relative to the node's first edge
    };
    std::vector<Frame> stack;

    for (std::uint32_t c : comp_order) {
        RedundancyComponent& rc = comps[c];
        const std::uint32_t root = comp_root[c];
        rc.root = dag.node(root).id;
        rc.occurrence_count = dag.node(root).occurrence_count;

        auto visit_member = [&](std::uint32_t i, std::uint32_t depth) {
            acc.enter(dag.node(i).id, depth);
            rc.members.push_back(dag.node(i).id);
            for (KeywordId w : dag.keywords(i)) {
                acc.contain(w);
                add(w, 1);
            }
            stack.push_back({i, depth, 0});
        };
        visit_member(root, 0);
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto edges = dag.children(f.node);
            if (f.next == edges.size()) {
                stack.pop_back();
                continue;
            }
            const DagEdge e = edges[f.next++];
            const std::uint32_t depth = f.depth + 1;
            if (comp_of[e.target] == c) {
                visit_member(e.target, depth);
                continue;
            }
            // Crossing edge: a dummy entry standing for the nested component,
            // at the position its root has inside this component's frame.
            const std::uint32_t nested = comp_of[e.target];
            const NodeId dummy = dag.node(e.target).id + e.offset;
            acc.enter(dummy, depth);
            for (auto [w, n] : contained[nested]) {
                acc.contain(w, n);
                add(w, n);
            }
            rcpm.push_back({dummy, nested, e.offset});
        }

        std::sort(touched.begin(), touched.end());
        auto& summary = contained[c];
        summary.reserve(touched.size());
        for (KeywordId w : touched) {
            summary.emplace_back(w, static_cast<std::int32_t>(tally[w]));
            tally[w] = 0;
        }
        touched.clear();

        auto built = acc.take();
        rc.keywords = std::move(built.keywords);
        rc.lists = std::move(built.lists);
    }

    std::sort(rcpm.begin(), rcpm.end(), [](const RcpmEntry& a, const RcpmEntry& b) { return a.dummy_id < b.dummy_id; });
    return IdCluster(dag.vocabulary(), std::move(comps), std::move(rcpm), dag.document_size());
}

namespace {

double percent_saved(std::size_t before, std::size_t after) {
    if (before == 0) return 0.0;
    return 100.0 * (static_cast<double>(before) - static_cast<double>(after)) / static_cast<double>(before);
}

}  // namespace

// Direct holders among the real (non-dummy) entries of one component list:
// an entry's own count is its n_desc minus its list children's n_desc.
std::size_t direct_member_count(const IdCluster& cluster, std::uint32_t c, const IdList& l) {
    std::vector<std::int64_t> own(l.n_desc.begin(), l.n_desc.end());
    for (std::size_t i = 0; i < l.size(); ++i)
        if (l.pid_pos[i] >= 0) own[l.pid_pos[i]] -= l.n_desc[i];
    std::size_t n = 0;
    for (std::size_t i = 0; i < l.size(); ++i)
        if (own[i] > 0 && !cluster.is_dummy(c, l.ids[i])) ++n;
    return n;
}

SavingsStats savings_report(const TreeIndex& tree, const IdCluster& cluster) {
    if (tree.node_count() != cluster.node_count() || !(tree.vocabulary() == cluster.vocabulary()))
        throw std::invalid_argument("tree index and IDCluster were built from different documents");

    SavingsStats s;
    const auto& words = tree.vocabulary().words();
    s.keywords.resize(words.size());
    for (KeywordId w = 0; w < words.size(); ++w) {
        auto& k = s.keywords[w];
        k.keyword = words[w];
        const IdList& l = tree.list(w);
        k.tree_path = l.size();
        k.tree_nodes = l.empty() ? 0 : static_cast<std::size_t>(l.n_desc[0]);
    }
    for (std::uint32_t c = 0; c < cluster.components().size(); ++c) {
        const auto& rc = cluster.component(c);
        for (std::size_t j = 0; j < rc.keywords.size(); ++j) {
            auto& k = s.keywords[rc.keywords[j]];
            k.cluster_path += rc.lists[j].size();
            k.cluster_nodes += direct_member_count(cluster, c, rc.lists[j]);
        }
    }
    for (auto& k : s.keywords) {
        k.s_path = percent_saved(k.tree_path, k.cluster_path);
        k.s_nodes = percent_saved(k.tree_nodes, k.cluster_nodes);
    }

    s.tree_entries = tree.entry_count();
    s.cluster_entries = cluster.entry_count();
    s.dummy_entries = cluster.dummy_entry_count();
    s.rcpm_entries = cluster.rcpm().size();
    s.components = cluster.components().size();
    s.entry_saving = percent_saved(s.tree_entries, s.cluster_entries);

    s.tree_bytes_slca = s.tree_entries * kSlcaIntsPerEntry * kIntegerBytes;
    s.tree_bytes_elca = s.tree_entries * kElcaIntsPerEntry * kIntegerBytes;
    s.rcpm_bytes = s.rcpm_entries * kRcpmIntsPerEntry * kIntegerBytes;
    s.cluster_bytes_slca = s.cluster_entries * kSlcaIntsPerEntry * kIntegerBytes + s.rcpm_bytes;
    s.cluster_bytes_elca = s.cluster_entries * kElcaIntsPerEntry * kIntegerBytes + s.rcpm_bytes;
    return s;
}

}  // namespace idcluster
