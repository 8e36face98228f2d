#include "idcluster/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace idcluster {

const char* to_string(Semantics s) { return s == Semantics::Slca ? "slca" : "elca"; }

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Fwd: return "fwd";
        case Algorithm::Bwd: return "bwd";
        case Algorithm::BwdPlus: return "bwd+";
    }
    return "?";
}

std::optional<Semantics> parse_semantics(std::string_view s) {
    if (s == "slca") return Semantics::Slca;
    if (s == "elca") return Semantics::Elca;
    return std::nullopt;
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
    if (s == "fwd") return Algorithm::Fwd;
    if (s == "bwd") return Algorithm::Bwd;
    if (s == "bwd+") return Algorithm::BwdPlus;
    return std::nullopt;
}

std::vector<std::string> normalize_keywords(std::span<const std::string> keywords) {
    if (keywords.empty()) throw std::invalid_argument("query needs at least one keyword");
    std::vector<std::string> out;
    for (const auto& k : keywords) {
        if (k.empty()) throw std::invalid_argument("empty query keyword");
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
    return out;
}

// --- forward cursors ---

bool CursorSet::exhausted() const {
    for (std::size_t i = 0; i < lists_.size(); ++i)
        if (static_cast<std::size_t>(pos_[i]) >= lists_[i]->size()) return true;
    return false;
}

bool CursorSet::next_common() {
    if (exhausted()) return false;
    NodeId target = 0;
    for (std::size_t i = 0; i < lists_.size(); ++i) target = std::max(target, lists_[i]->ids[pos_[i]]);
    for (;;) {
        bool agreed = true;
        for (std::size_t i = 0; i < lists_.size(); ++i) {
            const auto& ids = lists_[i]->ids;
            if (ids[pos_[i]] < target) {
                auto it = std::lower_bound(ids.begin() + pos_[i] + 1, ids.end(), target);
                if (it == ids.end()) {
                    pos_[i] = static_cast<std::int32_t>(ids.size());
                    return false;
                }
                pos_[i] = static_cast<std::int32_t>(it - ids.begin());
            }
            if (ids[pos_[i]] > target) {
                target = ids[pos_[i]];
                agreed = false;
            }
        }
        if (agreed) return true;
    }
}

std::optional<NodeId> fwd_get_ca(CursorSet& cursors) {
    if (!cursors.next_common()) return std::nullopt;
    return cursors.id();
}

namespace {

// Backward cursors. Each list also tracks `anc`, a position on the parent
// chain of the last node reported through found(). With `skip`, entries on
// that chain are stepped over (ancestors of an SLCA are never SLCA). With
// `narrow`, the chain bounds binary searches from below.
class BackwardCursors {
public:
    BackwardCursors(ListSpan lists, bool skip, bool narrow)
        : lists_(lists), pos_(lists.size()), anc_(lists.size(), -1), skip_(skip), narrow_(narrow) {
        for (std::size_t i = 0; i < lists.size(); ++i) pos_[i] = static_cast<std::int32_t>(lists[i]->size()) - 1;
    }

    bool prev_common() {
        for (std::size_t i = 0; i < lists_.size(); ++i) {
            if (skip_) skip_chain(i);
            if (pos_[i] < 0) return false;
        }
        NodeId target = lists_[0]->ids[pos_[0]];
        for (std::size_t i = 1; i < lists_.size(); ++i) target = std::min(target, lists_[i]->ids[pos_[i]]);
        for (;;) {
            bool agreed = true;
            for (std::size_t i = 0; i < lists_.size(); ++i) {
                const auto& ids = lists_[i]->ids;
                if (ids[pos_[i]] > target && !seek(i, target)) return false;
                if (ids[pos_[i]] < target) {
                    target = ids[pos_[i]];
                    agreed = false;
                }
            }
            if (agreed) return true;
        }
    }

    /// Consume the current common node and continue strictly before it.
    void found() {
        for (std::size_t i = 0; i < lists_.size(); ++i) {
            anc_[i] = lists_[i]->pid_pos[pos_[i]];
            --pos_[i];
        }
    }

    NodeId id() const { return lists_[0]->ids[pos_[0]]; }
    std::int32_t position(std::size_t i) const { return pos_[i]; }

private:
    // Largest position at or below pos_[i] whose id is <= t.
    bool seek(std::size_t i, NodeId t) {
        const IdList& l = *lists_[i];
        std::int32_t& anc = anc_[i];
        while (anc >= 0 && l.ids[anc] > t) anc = l.pid_pos[anc];
        std::int32_t lo = (narrow_ && anc >= 0) ? anc : 0;
        auto first = l.ids.begin() + lo;
        auto last = l.ids.begin() + pos_[i] + 1;
        pos_[i] = static_cast<std::int32_t>(std::upper_bound(first, last, t) - l.ids.begin()) - 1;
        if (skip_) skip_chain(i);
        return pos_[i] >= 0;
    }

    void skip_chain(std::size_t i) {
        const IdList& l = *lists_[i];
        std::int32_t& anc = anc_[i];
        std::int32_t& pos = pos_[i];
        while (pos >= 0) {
            while (anc > pos) anc = l.pid_pos[anc];
            if (anc != pos) break;
            --pos;
            anc = l.pid_pos[anc];
        }
    }

    ListSpan lists_;
    std::vector<std::int32_t> pos_;
    std::vector<std::int32_t> anc_;
    bool skip_;
    bool narrow_;
};

ResultSet bwd_slca_impl(ListSpan lists, bool narrow) {
    // With ancestor skipping every common node found is an SLCA: any CA
    // descendant would have been found earlier, and its SLCA's ancestors
    // (which include this node) are skipped.
    BackwardCursors cur(lists, /*skip=*/true, narrow);
    ResultSet out;
    while (cur.prev_common()) {
        out.push_back(cur.id());
        cur.found();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

ResultSet fwd_slca(ListSpan lists) {
    // CA(Q) is closed under ancestors, so a CA with any CA descendant is
    // immediately followed (in id order) by a CA child. Checking the parent
    // of the next CA is therefore enough.
    CursorSet cur(lists);
    ResultSet out;
    NodeId prev = kNoNode;
    std::int32_t prev_pos = -1;
    while (cur.next_common()) {
        if (prev != kNoNode && cur.parent_position() != prev_pos) out.push_back(prev);
        prev = cur.id();
        prev_pos = cur.position(0);
        cur.advance();
    }
    if (prev != kNoNode) out.push_back(prev);
    return out;
}

ResultSet bwd_slca(ListSpan lists) { return bwd_slca_impl(lists, false); }
ResultSet bwd_slca_plus(ListSpan lists) { return bwd_slca_impl(lists, true); }

ResultSet fwd_elca(ListSpan lists) {
    const std::size_t k = lists.size();
    struct Frame {
        NodeId id;
        std::int32_t pos;
    };
    std::vector<Frame> stack;
    std::vector<std::int32_t> own;    // k per frame
    std::vector<std::int32_t> child;  // k per frame, accumulated n_desc of CA children
    ResultSet out;

    auto process = [&] {
        std::size_t base = (stack.size() - 1) * k;
        bool elca = true;
        for (std::size_t i = 0; i < k; ++i) elca = elca && own[base + i] - child[base + i] > 0;
        if (elca) out.push_back(stack.back().id);
        stack.pop_back();
        if (!stack.empty()) {
            std::size_t parent = (stack.size() - 1) * k;
            for (std::size_t i = 0; i < k; ++i) child[parent + i] += own[base + i];
        }
        own.resize(base);
        child.resize(base);
    };

    CursorSet cur(lists);
    while (cur.next_common()) {
        while (!stack.empty() && stack.back().pos != cur.parent_position()) process();
        stack.push_back({cur.id(), cur.position(0)});
        for (std::size_t i = 0; i < k; ++i) {
            own.push_back(lists[i]->n_desc[cur.position(i)]);
            child.push_back(0);
        }
        cur.advance();
    }
    while (!stack.empty()) process();
    std::sort(out.begin(), out.end());
    return out;
}

ResultSet bwd_elca(ListSpan lists) {
    // CAs arrive in descending id order, so a node's CA children are all
    // pending (and on top of the stack) by the time the node itself shows up.
    const std::size_t k = lists.size();
    BackwardCursors cur(lists, /*skip=*/false, /*narrow=*/true);
    std::vector<std::int32_t> pending_parent;
    std::vector<std::int32_t> counts;  // k per pending frame
    std::vector<std::int32_t> sum(k);
    ResultSet out;
    while (cur.prev_common()) {
        std::fill(sum.begin(), sum.end(), 0);
        const std::int32_t p0 = cur.position(0);
        while (!pending_parent.empty() && pending_parent.back() == p0) {
            std::size_t base = (pending_parent.size() - 1) * k;
            for (std::size_t i = 0; i < k; ++i) sum[i] += counts[base + i];
            pending_parent.pop_back();
            counts.resize(base);
        }
        bool elca = true;
        for (std::size_t i = 0; i < k; ++i) {
            std::int32_t n = lists[i]->n_desc[cur.position(i)];
            elca = elca && n - sum[i] > 0;
            counts.push_back(n);
        }
        if (elca) out.push_back(cur.id());
        pending_parent.push_back(lists[0]->pid_pos[p0]);
        cur.found();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

ResultSet run_kernel(ListSpan lists, Semantics sem, Algorithm algo) {
    if (sem == Semantics::Slca) {
        switch (algo) {
            case Algorithm::Fwd: return fwd_slca(lists);
            case Algorithm::Bwd: return bwd_slca(lists);
            case Algorithm::BwdPlus: return bwd_slca_plus(lists);
        }
    }
    return algo == Algorithm::Fwd ? fwd_elca(lists) : bwd_elca(lists);
}

std::optional<std::vector<const IdList*>> resolve_lists(const TreeIndex& index,
                                                        std::span<const std::string> keywords) {
    std::vector<const IdList*> lists;
    for (const auto& k : normalize_keywords(keywords)) {
        const IdList& l = index.lookup(k);
        if (l.empty()) return std::nullopt;
        lists.push_back(&l);
    }
    std::stable_sort(lists.begin(), lists.end(), [](const IdList* a, const IdList* b) { return a->size() < b->size(); });
    return lists;
}

ResultSet search(const TreeIndex& index, std::span<const std::string> keywords, Semantics sem, Algorithm algo) {
    auto lists = resolve_lists(index, keywords);
    if (!lists) return {};
    return run_kernel(*lists, sem, algo);
}

ResultSet fwd_slca(const TreeIndex& index, std::span<const std::string> keywords) {
    return search(index, keywords, Semantics::Slca, Algorithm::Fwd);
}
ResultSet bwd_slca(const TreeIndex& index, std::span<const std::string> keywords) {
    return search(index, keywords, Semantics::Slca, Algorithm::Bwd);
}
ResultSet bwd_slca_plus(const TreeIndex& index, std::span<const std::string> keywords) {
    return search(index, keywords, Semantics::Slca, Algorithm::BwdPlus);
}
ResultSet fwd_elca(const TreeIndex& index, std::span<const std::string> keywords) {
    return search(index, keywords, Semantics::Elca, Algorithm::Fwd);
}
ResultSet bwd_elca(const TreeIndex& index, std::span<const std::string> keywords) {
    return search(index, keywords, Semantics::Elca, Algorithm::Bwd);
}

ResultSet common_ancestors(const TreeIndex& index, std::span<const std::string> keywords) {
    auto lists = resolve_lists(index, keywords);
    if (!lists) return {};
    CursorSet cur(*lists);
    ResultSet out;
    while (auto id = fwd_get_ca(cur)) {
        out.push_back(*id);
        cur.advance();
    }
    return out;
}

}  // namespace idcluster
