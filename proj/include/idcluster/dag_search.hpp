#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "idcluster/idcluster.hpp"
#include "idcluster/search.hpp"

namespace idcluster {

/// Instrumentation for one DAG query.
struct DagSearchStats {
    /// component -> number of local searches (at most 1 each)
    std::map<std::uint32_t, std::uint32_t> searches;
    /// Local results that are real component members rather than dummies,
    /// i.e. the results left to compute after compression.
    std::size_t local_member_results = 0;
};

/// Searches the root component with the baseline kernel `inner`, then
/// resolves dummy results through the RCPM, searching each nested component
/// at most once and shifting its cached results by each referencing edge's
/// offset. Output is ascending original-tree ids, equal to the tree-based
/// search on the same document.
ResultSet dag_search(const IdCluster& cluster, std::span<const std::string> keywords, Semantics sem, Algorithm inner,
                     DagSearchStats* stats = nullptr);

inline ResultSet dag_fwd_slca(const IdCluster& c, std::span<const std::string> kw, DagSearchStats* st = nullptr) {
    return dag_search(c, kw, Semantics::Slca, Algorithm::Fwd, st);
}
inline ResultSet dag_bwd_slca_plus(const IdCluster& c, std::span<const std::string> kw, DagSearchStats* st = nullptr) {
    return dag_search(c, kw, Semantics::Slca, Algorithm::BwdPlus, st);
}
inline ResultSet dag_fwd_elca(const IdCluster& c, std::span<const std::string> kw, DagSearchStats* st = nullptr) {
    return dag_search(c, kw, Semantics::Elca, Algorithm::Fwd, st);
}
inline ResultSet dag_bwd_elca(const IdCluster& c, std::span<const std::string> kw, DagSearchStats* st = nullptr) {
    return dag_search(c, kw, Semantics::Elca, Algorithm::Bwd, st);
}

/// Number of common ancestors that are real members of the components a
/// query reaches, i.e. the CA nodes left after compression.
std::size_t dag_common_ancestor_count(const IdCluster& cluster, std::span<const std::string> keywords);

}  // namespace idcluster
