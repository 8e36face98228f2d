#include "idcluster/oracle.hpp"

#include <algorithm>

namespace idcluster::oracle {

namespace {

bool is_ancestor_or_self(const DocumentTree& doc, NodeId a, NodeId n) {
    for (; n != kNoNode; n = doc.parent(n))
        if (n == a) return true;
    return false;
}

// For each keyword, the nodes that directly contain it (by string compare).
std::vector<std::vector<NodeId>> direct_holders(const DocumentTree& doc, std::span<const std::string> keywords) {
    std::vector<std::vector<NodeId>> holders(keywords.size());
    for (NodeId n = 1; n <= doc.size(); ++n) {
        for (KeywordId w : doc.keywords(n)) {
            const std::string& word = doc.vocabulary().word(w);
            for (std::size_t i = 0; i < keywords.size(); ++i)
                if (keywords[i] == word) holders[i].push_back(n);
        }
    }
    return holders;
}

}  // namespace

std::vector<NodeId> ca(const DocumentTree& doc, std::span<const std::string> keywords) {
    auto holders = direct_holders(doc, keywords);
    std::vector<NodeId> out;
    for (NodeId n = 1; n <= doc.size(); ++n) {
        bool all = true;
        for (const auto& h : holders) {
            bool found = std::any_of(h.begin(), h.end(), [&](NodeId m) { return is_ancestor_or_self(doc, n, m); });
            if (!found) {
                all = false;
                break;
            }
        }
        if (all) out.push_back(n);
    }
    return out;
}

std::vector<NodeId> slca(const DocumentTree& doc, std::span<const std::string> keywords) {
    auto cas = ca(doc, keywords);
    std::vector<NodeId> out;
    for (NodeId n : cas) {
        bool has_ca_descendant =
            std::any_of(cas.begin(), cas.end(), [&](NodeId d) { return d != n && is_ancestor_or_self(doc, n, d); });
        if (!has_ca_descendant) out.push_back(n);
    }
    return out;
}

std::vector<NodeId> elca(const DocumentTree& doc, std::span<const std::string> keywords) {
    auto cas = ca(doc, keywords);
    auto holders = direct_holders(doc, keywords);
    std::vector<bool> is_ca(static_cast<std::size_t>(doc.size()) + 1, false);
    for (NodeId n : cas) is_ca[n] = true;

    // m survives under n unless a CA strictly below n is an ancestor-or-self of m.
    auto survives = [&](NodeId n, NodeId m) {
        for (; m != n; m = doc.parent(m)) {
            if (m == kNoNode) return false;  // not in n's subtree at all
            if (is_ca[m]) return false;
        }
        return true;
    };
    std::vector<NodeId> out;
    for (NodeId n : cas) {
        bool all = true;
        for (const auto& h : holders) {
            if (!std::any_of(h.begin(), h.end(), [&](NodeId m) { return survives(n, m); })) {
                all = false;
                break;
            }
        }
        if (all) out.push_back(n);
    }
    return out;
}

}  // namespace idcluster::oracle
