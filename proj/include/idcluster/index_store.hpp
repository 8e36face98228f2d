#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "idcluster/idcluster.hpp"
#include "idcluster/tree_index.hpp"

namespace idcluster {

// On-disk format (all integers little-endian, 4 bytes):
//
//   "IDCX"  version  kind(1=tree, 2=cluster)  node_count
//   keyword_count, then per keyword: byte length + UTF-8 bytes
//   tree:    per keyword in id order: n, ids[n], pid_pos[n], n_desc[n]
//   cluster: component_count, then per component:
//              root, occurrence_count, member_count, members[...],
//              list_count, then per list: keyword id, n, ids, pid_pos, n_desc
//            rcpm_count, then per entry: dummy id, component, offset
//
// README.md documents the same layout.

inline constexpr std::uint32_t kFormatVersion = 1;

enum class IndexKind : std::uint32_t { Tree = 1, Cluster = 2 };

class StoreError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class IoError : public StoreError {
    using StoreError::StoreError;
};
class CorruptFileError : public StoreError {
    using StoreError::StoreError;
};
class VersionMismatchError : public StoreError {
    using StoreError::StoreError;
};

using AnyIndex = std::variant<TreeIndex, IdCluster>;

/// Writes atomically (temp file, then rename). Returns bytes written.
std::uint64_t save(const TreeIndex& index, const std::string& path);
std::uint64_t save(const IdCluster& cluster, const std::string& path);

std::string serialize(const TreeIndex& index);
std::string serialize(const IdCluster& cluster);

/// Throws IoError, CorruptFileError or VersionMismatchError.
AnyIndex load(const std::string& path);
AnyIndex deserialize(std::string_view bytes);

/// Exact file size from field counts.
std::uint64_t expected_file_size(const TreeIndex& index);
std::uint64_t expected_file_size(const IdCluster& cluster);

}  // namespace idcluster
