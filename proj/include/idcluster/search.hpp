#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idcluster/id_list.hpp"
#include "idcluster/tree_index.hpp"

namespace idcluster {

/// Ascending, duplicate-free node ids.
using ResultSet = std::vector<NodeId>;
using ListSpan = std::span<const IdList* const>;

enum class Semantics { Slca, Elca };

/// Baseline set-intersection variants. For ELCA, Bwd and BwdPlus both mean
/// the backward algorithm (which always uses the narrowed binary search).
enum class Algorithm { Fwd, Bwd, BwdPlus };

const char* to_string(Semantics s);
const char* to_string(Algorithm a);
std::optional<Semantics> parse_semantics(std::string_view s);
std::optional<Algorithm> parse_algorithm(std::string_view s);

/// Deduplicates query keywords. Throws std::invalid_argument for an empty
/// query or an empty keyword.
std::vector<std::string> normalize_keywords(std::span<const std::string> keywords);

/// Forward cursors C_i over the IdLists of one query.
class CursorSet {
public:
    explicit CursorSet(ListSpan lists) : lists_(lists), pos_(lists.size(), 0) {}

    bool exhausted() const;
    /// Moves every cursor to the smallest id present in all lists at or after
    /// the current positions. False once any list runs out.
    bool next_common();
    void advance() {
        for (auto& p : pos_) ++p;
    }

    NodeId id() const { return lists_[0]->ids[pos_[0]]; }
    std::int32_t position(std::size_t list) const { return pos_[list]; }
    /// Parent of the current node as a position in the first list.
    std::int32_t parent_position() const { return lists_[0]->pid_pos[pos_[0]]; }

private:
    ListSpan lists_;
    std::vector<std::int32_t> pos_;
};

/// Next common ancestor in ascending id order, or nullopt. Does not advance
/// past the returned node.
std::optional<NodeId> fwd_get_ca(CursorSet& cursors);

// List-level kernels. Preconditions: at least one list, no list empty. The
// returned ids are in whatever id space the lists use, sorted ascending.
ResultSet fwd_slca(ListSpan lists);
ResultSet bwd_slca(ListSpan lists);
ResultSet bwd_slca_plus(ListSpan lists);
ResultSet fwd_elca(ListSpan lists);
ResultSet bwd_elca(ListSpan lists);
ResultSet run_kernel(ListSpan lists, Semantics sem, Algorithm algo);

// Index-level entry points. Unknown keywords yield an empty result.
ResultSet fwd_slca(const TreeIndex& index, std::span<const std::string> keywords);
ResultSet bwd_slca(const TreeIndex& index, std::span<const std::string> keywords);
ResultSet bwd_slca_plus(const TreeIndex& index, std::span<const std::string> keywords);
ResultSet fwd_elca(const TreeIndex& index, std::span<const std::string> keywords);
ResultSet bwd_elca(const TreeIndex& index, std::span<const std::string> keywords);
ResultSet search(const TreeIndex& index, std::span<const std::string> keywords, Semantics sem, Algorithm algo);

/// All common ancestors, via repeated fwd_get_ca.
ResultSet common_ancestors(const TreeIndex& index, std::span<const std::string> keywords);

/// The query's lists ordered shortest first, or nullopt if some keyword has
/// no list (the result is then empty).
std::optional<std::vector<const IdList*>> resolve_lists(const TreeIndex& index,
                                                        std::span<const std::string> keywords);

}  // namespace idcluster
