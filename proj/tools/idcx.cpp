// idcx: build, query and benchmark keyword-search indices over XML.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "idcluster/bench.hpp"
#include "idcluster/corpus.hpp"
#include "idcluster/dag_search.hpp"
#include "idcluster/index_store.hpp"

using namespace idcluster;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out.flush()) throw IoError("write failed: " + path);
}

int cmd_index(const std::string& xml, const std::string& out, const std::string& kind) {
    DocumentTree doc = parse_document_file(xml);
    std::uint64_t bytes = 0;
    if (kind == "tree") {
        bytes = save(build_tree_index(doc), out);
    } else {
        bytes = save(build_idcluster(doc), out);
    }
    std::cout << "nodes=" << doc.size() << " kind=" << kind << " bytes=" << bytes << '\n';
    return 0;
}

int cmd_query(const std::string& path, const std::string& sem_name, const std::string& algo_name,
              const std::vector<std::string>& keywords) {
    auto sem = parse_semantics(sem_name);
    auto algo = parse_algorithm(algo_name);
    if (!sem || !algo) throw CLI::ValidationError("bad --semantics or --algo");
    AnyIndex index = load(path);
    ResultSet r = std::visit(
        [&](const auto& ix) -> ResultSet {
            if constexpr (std::is_same_v<std::decay_t<decltype(ix)>, TreeIndex>) {
                return search(ix, keywords, *sem, *algo);
            } else {
                return dag_search(ix, keywords, *sem, *algo);
            }
        },
        index);
    std::string out;
    for (NodeId id : r) out += std::to_string(id) + '\n';
    out += "count=" + std::to_string(r.size()) + '\n';
    std::cout << out;
    return 0;
}

int cmd_stats(const std::string& xml, std::size_t top) {
    DocumentTree doc = parse_document_file(xml);
    CompressedDag dag = compress(doc);
    TreeIndex tree = build_tree_index(doc);
    IdCluster cluster = build_idcluster(dag);
    SavingsStats s = savings_report(tree, cluster);

    std::cout << "nodes            " << doc.size() << '\n'
              << "dag nodes        " << dag.size() << '\n'
              << "dag edges        " << dag.edge_count() << " (" << dag.offset_edge_count() << " offset)\n"
              << "keywords         " << tree.vocabulary().size() << '\n'
              << "components       " << s.components << '\n'
              << "rcpm entries     " << s.rcpm_entries << '\n'
              << "tree entries     " << s.tree_entries << '\n'
              << "cluster entries  " << s.cluster_entries << " (" << s.dummy_entries << " dummy)\n"
              << std::fixed << std::setprecision(2) << "entry saving     " << s.entry_saving << "%\n"
              << "bytes slca       tree " << s.tree_bytes_slca << "  cluster " << s.cluster_bytes_slca << '\n'
              << "bytes elca       tree " << s.tree_bytes_elca << "  cluster " << s.cluster_bytes_elca << '\n'
              << "rcpm bytes       " << s.rcpm_bytes << "\n\n";

    std::vector<const KeywordSavings*> rows;
    for (const auto& k : s.keywords) rows.push_back(&k);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto* a, const auto* b) { return a->tree_path > b->tree_path; });
    if (top > 0 && rows.size() > top) rows.resize(top);

    std::size_t w = 7;
    for (const auto* k : rows) w = std::max(w, k->keyword.size());
    std::cout << std::left << std::setw(int(w) + 2) << "keyword" << std::right << std::setw(11) << "tree_nodes"
              << std::setw(14) << "cluster_nodes" << std::setw(9) << "S_nodes" << std::setw(11) << "tree_path"
              << std::setw(14) << "cluster_path" << std::setw(9) << "S_path" << '\n';
    for (const auto* k : rows) {
        std::cout << std::left << std::setw(int(w) + 2) << k->keyword << std::right << std::setw(11) << k->tree_nodes
                  << std::setw(14) << k->cluster_nodes << std::setw(8) << k->s_nodes << '%' << std::setw(11)
                  << k->tree_path << std::setw(14) << k->cluster_path << std::setw(8) << k->s_path << "%\n";
    }
    return 0;
}

int cmd_bench(const std::string& xml, const std::string& queries_path, std::size_t runs, const std::string& csv) {
    auto t0 = std::chrono::steady_clock::now();
    DocumentTree doc = parse_document_file(xml);
    TreeIndex tree = build_tree_index(doc);
    IdCluster cluster = build_idcluster(doc);
    auto queries = queries_path.empty() ? default_corpus_queries() : parse_query_file(read_file(queries_path));
    if (queries.empty()) throw std::invalid_argument("no queries");
    double build_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "nodes=" << doc.size() << " components=" << cluster.components().size() << " build="
              << std::fixed << std::setprecision(2) << build_s << "s runs=" << runs << "\n\n";
    std::cout.unsetf(std::ios::fixed);

    BenchOptions opt;
    opt.runs = runs;
    auto reports = run_bench(tree, cluster, queries, opt);
    print_report(std::cout, reports);
    if (!csv.empty()) {
        std::ostringstream s;
        print_csv(s, reports);
        write_text(csv, s.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IDCluster keyword search over XML"};
    app.require_subcommand(1);

    std::string xml, out, kind = "cluster", idx, sem = "slca", algo = "fwd", queries, csv;
    std::vector<std::string> keywords;
    std::size_t runs = 100, top = 20;

    auto* index = app.add_subcommand("index", "Build a tree or cluster index from an XML file");
    index->add_option("xml", xml, "XML document ('-' for stdin)")->required();
    index->add_option("--out", out, "Index file to write")->required();
    index->add_option("--kind", kind, "tree or cluster")->check(CLI::IsMember({"tree", "cluster"}));

    auto* query = app.add_subcommand("query", "Run a keyword query against an index file");
    query->add_option("index", idx, "Index file")->required()->check(CLI::ExistingFile);
    query->add_option("--semantics", sem, "slca or elca")->check(CLI::IsMember({"slca", "elca"}));
    query->add_option("--algo", algo, "fwd, bwd or bwd+")->check(CLI::IsMember({"fwd", "bwd", "bwd+"}));
    query->add_option("--keywords", keywords, "Query keywords")->required()->expected(1, -1);

    auto* stats = app.add_subcommand("stats", "Print compression savings for an XML file");
    stats->add_option("xml", xml, "XML document")->required();
    stats->add_option("--top", top, "Keyword rows to print, most frequent first (0 = all)");

    auto* bench = app.add_subcommand("bench", "Time all algorithms on a query set");
    bench->add_option("xml", xml, "XML document")->required();
    bench->add_option("--queries", queries, "Query file (default: built-in corpus queries)")
        ->check(CLI::ExistingFile);
    bench->add_option("--runs", runs, "Timed runs per algorithm and query")->check(CLI::PositiveNumber);
    bench->add_option("--csv", csv, "Also write the report as CSV ('-' for stdout)");

    CorpusOptions copt;
    double size_mb = 0;
    auto* gen = app.add_subcommand("generate", "Write a synthetic release corpus");
    gen->add_option("--out", out, "Output XML ('-' for stdout)")->required();
    gen->add_option("--records", copt.records, "Record count");
    gen->add_option("--size-mb", size_mb, "Target size in MB (overrides --records)");
    gen->add_option("--dup-ratio", copt.duplicate_ratio, "Share of records with a pooled format block")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--skew", copt.keyword_skew, "Zipf exponent of free-text words")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", copt.seed, "Random seed");

    double fraction = 1;
    auto* scale = app.add_subcommand("scale", "Keep the first fraction of the root's records");
    scale->add_option("xml", xml, "XML document")->required();
    scale->add_option("--fraction", fraction, "Fraction in (0, 1]")->required();
    scale->add_option("--out", out, "Output XML ('-' for stdout)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*index) return cmd_index(xml, out, kind);
        if (*query) return cmd_query(idx, sem, algo, keywords);
        if (*stats) return cmd_stats(xml, top);
        if (*bench) return cmd_bench(xml, queries, runs, csv);
        if (*gen) {
            if (size_mb > 0) copt.target_bytes = static_cast<std::size_t>(size_mb * 1024 * 1024);
            write_text(out, generate_corpus(copt));
            return 0;
        }
        if (*scale) {
            write_text(out, scale_corpus(read_file(xml), fraction));
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "idcx: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "idcx: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
