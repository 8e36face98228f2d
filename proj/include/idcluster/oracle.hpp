#pragma once

#include <span>
#include <string>
#include <vector>

#include "idcluster/document.hpp"

// Brute-force reference semantics, transcribed from the definitions. They
// only use parent links and direct keyword sets, and share nothing with the
// index or the search code. Quadratic; meant for tests.
namespace idcluster::oracle {

/// Nodes whose subtree (self included) contains every keyword.
std::vector<NodeId> ca(const DocumentTree& doc, std::span<const std::string> keywords);

/// CA nodes without a CA descendant.
std::vector<NodeId> slca(const DocumentTree& doc, std::span<const std::string> keywords);

/// CA nodes that still contain every keyword once the subtrees of all their
/// CA descendants are removed.
std::vector<NodeId> elca(const DocumentTree& doc, std::span<const std::string> keywords);

}  // namespace idcluster::oracle
