#pragma once

#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "idcluster/dag_search.hpp"
#include "idcluster/idcluster.hpp"
#include "idcluster/search.hpp"
#include "idcluster/tree_index.hpp"

namespace idcluster {

/// Cat1: no relevant node is compressed. Cat2: some relevant nodes are
/// compressed but every CA lies in the root component. Cat3: some nested
/// component holds all keywords, so CAs exist below the root component.
enum class QueryCategory { Cat1 = 1, Cat2 = 2, Cat3 = 3 };

const char* to_string(QueryCategory c);
/// Checks Cat3, then Cat2, else Cat1. Both indices must come from one document.
QueryCategory classify_query(const IdCluster& cluster, const TreeIndex& tree, std::span<const std::string> keywords);

/// How much of the query's work disappears under compression, in percent.
struct QueryProperties {
    std::size_t ca = 0, ca_left = 0;
    std::size_t elca = 0, elca_left = 0;
    std::size_t slca = 0, slca_left = 0;
    double s_ca = 0, s_elca = 0, s_slca = 0;
    double s_nodes = 0, s_path = 0;
};

QueryProperties query_properties(const TreeIndex& tree, const IdCluster& cluster,
                                 std::span<const std::string> keywords);

enum class BenchAlgorithm {
    FwdSlca,
    BwdSlca,
    BwdSlcaPlus,
    DagFwdSlca,
    DagBwdSlcaPlus,
    FwdElca,
    BwdElca,
    DagFwdElca,
    DagBwdElca,
};

const char* to_string(BenchAlgorithm a);
Semantics semantics_of(BenchAlgorithm a);
bool is_dag(BenchAlgorithm a);
std::vector<BenchAlgorithm> all_bench_algorithms();

ResultSet run_algorithm(BenchAlgorithm a, const TreeIndex& tree, const IdCluster& cluster,
                        std::span<const std::string> keywords, DagSearchStats* stats = nullptr);

struct AlgorithmTiming {
    BenchAlgorithm algorithm;
    double mean_ms = 0;
    std::size_t results = 0;
    std::size_t components_searched = 0;  // DAG variants only
};

struct QueryReport {
    std::vector<std::string> keywords;
    QueryCategory category = QueryCategory::Cat1;
    QueryProperties properties;
    std::vector<AlgorithmTiming> timings;

    const AlgorithmTiming* timing(BenchAlgorithm a) const;
};

struct BenchOptions {
    std::size_t runs = 100;  // timed runs after one warm-up run
    std::vector<BenchAlgorithm> algorithms = all_bench_algorithms();
};

/// Raised when two algorithms of the same semantics disagree on a query.
class ResultMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<QueryReport> run_bench(const TreeIndex& tree, const IdCluster& cluster,
                                   const std::vector<std::vector<std::string>>& queries, const BenchOptions& options);

void print_report(std::ostream& out, const std::vector<QueryReport>& reports);
void print_csv(std::ostream& out, const std::vector<QueryReport>& reports);

std::string join_keywords(std::span<const std::string> keywords);

}  // namespace idcluster
