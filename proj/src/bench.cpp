#include "idcluster/bench.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace idcluster {

namespace {

double percent_saved(std::size_t before, std::size_t after) {
    if (before == 0) return 0.0;
    return 100.0 * (double(before) - double(after)) / double(before);
}

std::optional<std::vector<KeywordId>> query_ids(const Vocabulary& vocab, std::span<const std::string> keywords) {
    std::vector<KeywordId> ids;
    for (const auto& k : normalize_keywords(keywords)) {
        auto w = vocab.find(k);
        if (!w) return std::nullopt;
        ids.push_back(*w);
    }
    return ids;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

const char* to_string(QueryCategory c) {
    switch (c) {
        case QueryCategory::Cat1: return "Cat1";
        case QueryCategory::Cat2: return "Cat2";
        case QueryCategory::Cat3: return "Cat3";
    }
    return "?";
}

QueryCategory classify_query(const IdCluster& cluster, const TreeIndex& tree, std::span<const std::string> keywords) {
    auto ids = query_ids(tree.vocabulary(), keywords);
    if (!ids || !(tree.vocabulary() == cluster.vocabulary())) return QueryCategory::Cat1;
    bool any = false;
    for (std::uint32_t c = 1; c < cluster.components().size(); ++c) {
        const auto& rc = cluster.component(c);
        std::size_t held = 0;
        for (KeywordId w : *ids) held += rc.find(w) != nullptr;
        if (held == ids->size()) return QueryCategory::Cat3;
        any = any || held > 0;
    }
    return any ? QueryCategory::Cat2 : QueryCategory::Cat1;
}

QueryProperties query_properties(const TreeIndex& tree, const IdCluster& cluster,
                                 std::span<const std::string> keywords) {
    QueryProperties p;
    p.ca = common_ancestors(tree, keywords).size();
    p.ca_left = dag_common_ancestor_count(cluster, keywords);
    p.elca = fwd_elca(tree, keywords).size();
    p.slca = fwd_slca(tree, keywords).size();
    DagSearchStats es, ss;
    dag_fwd_elca(cluster, keywords, &es);
    dag_fwd_slca(cluster, keywords, &ss);
    p.elca_left = es.local_member_results;
    p.slca_left = ss.local_member_results;
    p.s_ca = percent_saved(p.ca, p.ca_left);
    p.s_elca = percent_saved(p.elca, p.elca_left);
    p.s_slca = percent_saved(p.slca, p.slca_left);

    std::size_t tree_path = 0, tree_nodes = 0, cluster_path = 0, cluster_nodes = 0;
    if (auto ids = query_ids(tree.vocabulary(), keywords)) {
        for (KeywordId w : *ids) {
            const IdList& l = tree.list(w);
            tree_path += l.size();
            tree_nodes += l.empty() ? 0 : static_cast<std::size_t>(l.n_desc[0]);
            for (std::uint32_t c = 0; c < cluster.components().size(); ++c) {
                if (const IdList* cl = cluster.component(c).find(w)) {
                    cluster_path += cl->size();
                    cluster_nodes += direct_member_count(cluster, c, *cl);
                }
            }
        }
    }
    p.s_path = percent_saved(tree_path, cluster_path);
    p.s_nodes = percent_saved(tree_nodes, cluster_nodes);
    return p;
}

const char* to_string(BenchAlgorithm a) {
    switch (a) {
        case BenchAlgorithm::FwdSlca: return "FwdSLCA";
        case BenchAlgorithm::BwdSlca: return "BwdSLCA";
        case BenchAlgorithm::BwdSlcaPlus: return "BwdSLCA+";
        case BenchAlgorithm::DagFwdSlca: return "DagFwdSLCA";
        case BenchAlgorithm::DagBwdSlcaPlus: return "DagBwdSLCA+";
        case BenchAlgorithm::FwdElca: return "FwdELCA";
        case BenchAlgorithm::BwdElca: return "BwdELCA";
        case BenchAlgorithm::DagFwdElca: return "DagFwdELCA";
        case BenchAlgorithm::DagBwdElca: return "DagBwdELCA";
    }
    return "?";
}

Semantics semantics_of(BenchAlgorithm a) {
    switch (a) {
        case BenchAlgorithm::FwdElca:
        case BenchAlgorithm::BwdElca:
        case BenchAlgorithm::DagFwdElca:
        case BenchAlgorithm::DagBwdElca: return Semantics::Elca;
        default: return Semantics::Slca;
    }
}

bool is_dag(BenchAlgorithm a) {
    return a == BenchAlgorithm::DagFwdSlca || a == BenchAlgorithm::DagBwdSlcaPlus || a == BenchAlgorithm::DagFwdElca ||
           a == BenchAlgorithm::DagBwdElca;
}

std::vector<BenchAlgorithm> all_bench_algorithms() {
    return {BenchAlgorithm::FwdSlca,        BenchAlgorithm::BwdSlca, BenchAlgorithm::BwdSlcaPlus,
            BenchAlgorithm::DagFwdSlca,     BenchAlgorithm::DagBwdSlcaPlus, BenchAlgorithm::FwdElca,
            BenchAlgorithm::BwdElca,        BenchAlgorithm::DagFwdElca, BenchAlgorithm::DagBwdElca};
}

ResultSet run_algorithm(BenchAlgorithm a, const TreeIndex& tree, const IdCluster& cluster,
                        std::span<const std::string> keywords, DagSearchStats* stats) {
    switch (a) {
        case BenchAlgorithm::FwdSlca: return fwd_slca(tree, keywords);
        case BenchAlgorithm::BwdSlca: return bwd_slca(tree, keywords);
        case BenchAlgorithm::BwdSlcaPlus: return bwd_slca_plus(tree, keywords);
        case BenchAlgorithm::DagFwdSlca: return dag_fwd_slca(cluster, keywords, stats);
        case BenchAlgorithm::DagBwdSlcaPlus: return dag_bwd_slca_plus(cluster, keywords, stats);
        case BenchAlgorithm::FwdElca: return fwd_elca(tree, keywords);
        case BenchAlgorithm::BwdElca: return bwd_elca(tree, keywords);
        case BenchAlgorithm::DagFwdElca: return dag_fwd_elca(cluster, keywords, stats);
        case BenchAlgorithm::DagBwdElca: return dag_bwd_elca(cluster, keywords, stats);
    }
    return {};
}

const AlgorithmTiming* QueryReport::timing(BenchAlgorithm a) const {
    for (const auto& t : timings)
        if (t.algorithm == a) return &t;
    return nullptr;
}

std::string join_keywords(std::span<const std::string> keywords) {
    std::string s;
    for (const auto& k : keywords) {
        if (!s.empty()) s += ' ';
        s += k;
    }
    return s;
}

std::vector<QueryReport> run_bench(const TreeIndex& tree, const IdCluster& cluster,
                                   const std::vector<std::vector<std::string>>& queries, const BenchOptions& options) {
    if (options.runs == 0) throw std::invalid_argument("runs must be positive");
    if (tree.node_count() != cluster.node_count() || !(tree.vocabulary() == cluster.vocabulary()))
        throw std::invalid_argument("tree index and IDCluster were built from different documents");

    using Clock = std::chrono::steady_clock;
    std::vector<QueryReport> reports;
    for (const auto& q : queries) {
        QueryReport rep;
        rep.keywords = q;
        rep.category = classify_query(cluster, tree, q);
        rep.properties = query_properties(tree, cluster, q);
        const ResultSet ref_slca = fwd_slca(tree, q);
        const ResultSet ref_elca = fwd_elca(tree, q);

        // One untimed warm-up call per algorithm doubles as the correctness
        // check. Timed runs are interleaved so that slow phases of the
        // machine hit every algorithm alike.
        for (BenchAlgorithm a : options.algorithms) {
            AlgorithmTiming t{a};
            DagSearchStats stats;
            ResultSet warm = run_algorithm(a, tree, cluster, q, &stats);
            const ResultSet& ref = semantics_of(a) == Semantics::Slca ? ref_slca : ref_elca;
            if (warm != ref) {
                throw ResultMismatch(std::string(to_string(a)) + " disagrees with the tree-based reference on query '" +
                                     join_keywords(q) + "' (" + std::to_string(warm.size()) + " vs " +
                                     std::to_string(ref.size()) + " results)");
            }
            t.results = warm.size();
            t.components_searched = is_dag(a) ? stats.searches.size() : 0;
            rep.timings.push_back(t);
        }
        std::vector<double> total(options.algorithms.size(), 0.0);
        for (std::size_t r = 0; r < options.runs; ++r) {
            for (std::size_t i = 0; i < options.algorithms.size(); ++i) {
                auto begin = Clock::now();
                std::size_t n = run_algorithm(options.algorithms[i], tree, cluster, q).size();
                total[i] += std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
                if (n != rep.timings[i].results) throw ResultMismatch("unstable result size during timing");
            }
        }
        for (std::size_t i = 0; i < total.size(); ++i) rep.timings[i].mean_ms = total[i] / double(options.runs);
        reports.push_back(std::move(rep));
    }
    return reports;
}

void print_report(std::ostream& out, const std::vector<QueryReport>& reports) {
    std::size_t qw = 5;
    for (const auto& r : reports) qw = std::max(qw, join_keywords(r.keywords).size());

    auto flags = out.flags();
    out << std::left << std::setw(int(qw) + 2) << "query" << std::setw(6) << "cat" << std::right << std::setw(8)
        << "CA" << std::setw(8) << "S_ca" << std::setw(8) << "ELCA" << std::setw(8) << "S_elca" << std::setw(8)
        << "SLCA" << std::setw(8) << "S_slca" << std::setw(9) << "S_nodes" << std::setw(8) << "S_path" << '\n';
    out << std::fixed << std::setprecision(1);
    for (const auto& r : reports) {
        const auto& p = r.properties;
        out << std::left << std::setw(int(qw) + 2) << join_keywords(r.keywords) << std::setw(6) << to_string(r.category)
            << std::right << std::setw(8) << p.ca << std::setw(7) << p.s_ca << '%' << std::setw(8) << p.elca
            << std::setw(7) << p.s_elca << '%' << std::setw(8) << p.slca << std::setw(7) << p.s_slca << '%'
            << std::setw(8) << p.s_nodes << '%' << std::setw(7) << p.s_path << '%' << '\n';
    }
    out << '\n';

    if (reports.empty()) {
        out.flags(flags);
        return;
    }
    out << std::left << std::setw(int(qw) + 2) << "mean ms";
    for (const auto& t : reports.front().timings) out << std::right << std::setw(13) << to_string(t.algorithm);
    out << '\n' << std::setprecision(4);
    for (const auto& r : reports) {
        out << std::left << std::setw(int(qw) + 2) << join_keywords(r.keywords);
        for (const auto& t : r.timings) out << std::right << std::setw(13) << t.mean_ms;
        out << '\n';
    }
    out << '\n' << std::left << std::setw(int(qw) + 2) << "results/comps";
    for (const auto& t : reports.front().timings) out << std::right << std::setw(13) << to_string(t.algorithm);
    out << '\n';
    for (const auto& r : reports) {
        out << std::left << std::setw(int(qw) + 2) << join_keywords(r.keywords);
        for (const auto& t : r.timings) {
            std::string cell = std::to_string(t.results);
            if (is_dag(t.algorithm)) cell += "/" + std::to_string(t.components_searched);
            out << std::right << std::setw(13) << cell;
        }
        out << '\n';
    }
    out.flags(flags);
}

void print_csv(std::ostream& out, const std::vector<QueryReport>& reports) {
    out << "query,category,algorithm,mean_ms,results,components_searched,s_ca,s_elca,s_slca,s_nodes,s_path\n";
    for (const auto& r : reports) {
        const auto& p = r.properties;
        for (const auto& t : r.timings) {
            std::ostringstream row;
            row << std::setprecision(6) << csv_field(join_keywords(r.keywords)) << ',' << to_string(r.category) << ','
                << to_string(t.algorithm) << ',' << t.mean_ms << ',' << t.results << ',' << t.components_searched << ','
                << p.s_ca << ',' << p.s_elca << ',' << p.s_slca << ',' << p.s_nodes << ',' << p.s_path << '\n';
            out << row.str();
        }
    }
}

}  // namespace idcluster
