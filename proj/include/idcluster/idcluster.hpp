#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "idcluster/dag.hpp"
#include "idcluster/id_list.hpp"
#include "idcluster/tree_index.hpp"

namespace idcluster {

/// Maximal connected region of the DAG whose nodes share one occurrence
/// count. Ids inside a component are those of its first occurrence.
struct RedundancyComponent {
    NodeId root = kNoNode;
    std::uint32_t occurrence_count = 0;
    std::vector<NodeId> members;      // ascending
    std::vector<KeywordId> keywords;  // ascending, parallel to lists
    std::vector<IdList> lists;        // includes dummy entries

    /// nullptr if nothing in the component contains w.
    const IdList* find(KeywordId w) const;
    std::size_t entry_count() const;

    friend bool operator==(const RedundancyComponent&, const RedundancyComponent&) = default;
};

/// Redundancy component pointer map entry, keyed by dummy id.
struct RcpmEntry {
    NodeId dummy_id;
    std::uint32_t component;
    std::int32_t offset;

    friend bool operator==(const RcpmEntry&, const RcpmEntry&) = default;
};

/// Per-component IdLists plus the single RCPM that links dummy entries to the
/// nested components they stand for.
class IdCluster {
public:
    IdCluster() = default;
    IdCluster(Vocabulary vocab, std::vector<RedundancyComponent> components, std::vector<RcpmEntry> rcpm,
              NodeId node_count);

    const Vocabulary& vocabulary() const { return vocab_; }
    const std::vector<RedundancyComponent>& components() const { return components_; }
    const RedundancyComponent& component(std::uint32_t c) const { return components_[c]; }
    /// Sorted by dummy id.
    const std::vector<RcpmEntry>& rcpm() const { return rcpm_; }
    NodeId node_count() const { return node_count_; }

    /// Constant-time lookup: a bit per node id marks RCPM keys, and a
    /// per-word prefix count turns a set bit into its RCPM position.
    const RcpmEntry* rcpm_find(NodeId id) const {
        const std::int64_t i = rcpm_index(id);
        return i < 0 ? nullptr : &rcpm_[static_cast<std::size_t>(i)];
    }
    /// Position of id in rcpm(), or -1.
    std::int64_t rcpm_index(NodeId id) const {
        if (id <= 0 || id > node_count_) return -1;
        const std::uint64_t word = rcpm_bits_[id >> 6];
        const std::uint64_t below = (std::uint64_t(1) << (id & 63)) - 1;
        if (!(word >> (id & 63) & 1)) return -1;
        return rcpm_rank_[id >> 6] + std::popcount(word & below);
    }
    /// rcpm()[i].component from a dense copy. The offset needs no lookup:
    /// it is always the dummy id minus the component's root.
    const std::uint32_t* rcpm_component_at(std::int64_t i) const { return &rcpm_component_[static_cast<std::size_t>(i)]; }
    /// A dummy entry of component c (the component's own root may share its
    /// id with a dummy in the parent component and is not one).
    bool is_dummy(std::uint32_t c, NodeId id) const { return id != components_[c].root && rcpm_find(id) != nullptr; }

    std::size_t entry_count() const;
    std::size_t dummy_entry_count() const;

    friend bool operator==(const IdCluster& a, const IdCluster& b) {
        return a.vocab_ == b.vocab_ && a.components_ == b.components_ && a.rcpm_ == b.rcpm_ &&
               a.node_count_ == b.node_count_;
    }

private:
    Vocabulary vocab_;
    std::vector<RedundancyComponent> components_;
    std::vector<RcpmEntry> rcpm_;
    std::vector<std::uint64_t> rcpm_bits_;
    std::vector<std::uint32_t> rcpm_rank_;
    std::vector<std::uint32_t> rcpm_component_;
    NodeId node_count_ = 0;
};

/// Second construction pass: select components, build their IdLists with
/// dummy entries, fill the RCPM.
IdCluster build_idcluster(const CompressedDag& dag);

inline IdCluster build_idcluster(const DocumentTree& doc) { return build_idcluster(compress(doc)); }

struct KeywordSavings {
    std::string keyword;
    std::size_t tree_path = 0;     // IdList entries in the tree index
    std::size_t cluster_path = 0;  // entries over all components, dummies included
    std::size_t tree_nodes = 0;    // nodes directly containing the keyword
    std::size_t cluster_nodes = 0; // component members directly containing it
    double s_path = 0;             // percent saved
    double s_nodes = 0;
};

struct SavingsStats {
    std::vector<KeywordSavings> keywords;  // vocabulary order
    std::size_t tree_entries = 0;
    std::size_t cluster_entries = 0;
    std::size_t dummy_entries = 0;
    std::size_t rcpm_entries = 0;
    std::size_t components = 0;
    double entry_saving = 0;  // percent

    // Memory model: 4-byte integers, 2 per list entry for SLCA search and 3
    // for ELCA search, 2 per RCPM entry. Cluster totals include the RCPM.
    std::uint64_t tree_bytes_slca = 0;
    std::uint64_t tree_bytes_elca = 0;
    std::uint64_t cluster_bytes_slca = 0;
    std::uint64_t cluster_bytes_elca = 0;
    std::uint64_t rcpm_bytes = 0;
};

inline constexpr std::uint64_t kIntegerBytes = 4;
inline constexpr std::uint64_t kSlcaIntsPerEntry = 2;
inline constexpr std::uint64_t kElcaIntsPerEntry = 3;
inline constexpr std::uint64_t kRcpmIntsPerEntry = 2;

/// Real (non-dummy) entries of component c's list l that directly contain
/// the list's keyword.
std::size_t direct_member_count(const IdCluster& cluster, std::uint32_t c, const IdList& l);

/// Throws std::invalid_argument if the two indices describe different documents.
SavingsStats savings_report(const TreeIndex& tree, const IdCluster& cluster);

}  // namespace idcluster
