// Acceptance checks, one PASS/FAIL line per criterion. Exit status is
// nonzero if any criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "idcluster/bench.hpp"
#include "idcluster/corpus.hpp"
#include "idcluster/index_store.hpp"
#include "idcluster/oracle.hpp"
#include "support/random_tree.hpp"

using namespace idcluster;
using Clock = std::chrono::steady_clock;
using Ids = std::vector<NodeId>;
using Query = std::vector<std::string>;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failure message; later failures only count.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures_++ == 0) first_ = what;
    }
    Outcome done(std::string detail) const {
        if (failures_ == 0) return {true, std::move(detail)};
        return {false, std::to_string(failures_) + " failure(s), first: " + first_ + "; " + detail};
    }

private:
    std::size_t failures_ = 0;
    std::string first_;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string ids_str(const Ids& ids) {
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
    return s + "}";
}

struct Params {
    std::size_t random_docs = 1000;
    std::size_t queries_per_doc = 3;
    double corpus_mb = 100;
    double perf_dup_ratio = 0.9;
    std::size_t runs = 300;
    std::uint64_t seed = 2024;
};

struct RandomInstance {
    DocumentTree doc;
    std::vector<Query> queries;
};

// The shared random corpus for criteria 3-5: 50-500 nodes, duplicate
// injection probability drawn from [0, 0.8], 1-4 keyword queries.
std::vector<RandomInstance> random_corpus(const Params& p) {
    idcluster::testing::TreeGen gen(p.seed);
    std::vector<RandomInstance> out;
    for (std::size_t i = 0; i < p.random_docs; ++i) {
        RandomInstance r{gen.document({.min_nodes = 50, .max_nodes = 500, .duplicate_probability = gen.real() * 0.8}),
                         {}};
        for (std::size_t k = 0; k < p.queries_per_doc; ++k) r.queries.push_back(gen.query());
        out.push_back(std::move(r));
    }
    return out;
}

const Query kUsaEnglish{"USA", "English"};

Outcome criterion1() {
    Check c;
    DocumentTree t = parse_document_file(idcluster::testing::fixture_path("fig1.xml"));
    TreeIndex tree = build_tree_index(t);
    IdCluster cl = build_idcluster(t);
    const Ids ca{1, 2, 4, 5, 11, 12}, slca{5, 12}, elca{2, 5, 12};
    c.expect(oracle::ca(t, kUsaEnglish) == ca, "ca_oracle " + ids_str(oracle::ca(t, kUsaEnglish)));
    c.expect(common_ancestors(tree, kUsaEnglish) == ca, "common_ancestors");
    c.expect(oracle::slca(t, kUsaEnglish) == slca, "slca_oracle");
    c.expect(oracle::elca(t, kUsaEnglish) == elca, "elca_oracle");
    double worst_ms = 0;
    for (BenchAlgorithm a : all_bench_algorithms()) {
        auto t0 = Clock::now();
        Ids got = run_algorithm(a, tree, cl, kUsaEnglish);
        worst_ms = std::max(worst_ms, seconds_since(t0) * 1e3);
        const Ids& want = semantics_of(a) == Semantics::Slca ? slca : elca;
        c.expect(got == want, std::string(to_string(a)) + " gave " + ids_str(got));
    }
    c.expect(worst_ms < 1.0, "slowest query took " + fmt("%.3f ms", worst_ms));
    return c.done("9 implementations + oracles exact, slowest " + fmt("%.4f ms", worst_ms));
}

Outcome criterion2() {
    Check c;
    IdCluster cl = build_idcluster(parse_document_file(idcluster::testing::fixture_path("fig1.xml")));
    c.expect(cl.components().size() >= 2, "components=" + std::to_string(cl.components().size()));
    const auto& r = cl.rcpm();
    c.expect(r.size() == 2, "rcpm entries=" + std::to_string(r.size()));
    std::uint32_t rc1 = 0;
    if (r.size() == 2) {
        std::set<std::int32_t> offsets{r[0].offset, r[1].offset};
        c.expect(offsets == std::set<std::int32_t>{0, 7}, "offsets not {+0,+7}");
        c.expect(r[0].component == r[1].component, "entries point to different components");
        rc1 = r[0].component;
        c.expect(cl.rcpm_find(5 + 7) == nullptr, "12 must not be an RCPM key");
    }
    for (BenchAlgorithm a : all_bench_algorithms()) {
        if (!is_dag(a)) continue;
        DagSearchStats st;
        run_algorithm(a, TreeIndex{}, cl, kUsaEnglish, &st);
        auto it = st.searches.find(rc1);
        c.expect(it != st.searches.end() && it->second == 1, std::string(to_string(a)) + " did not search rc1 once");
        for (const auto& [comp, n] : st.searches) c.expect(n == 1, "component searched twice");
    }
    return c.done(std::to_string(cl.components().size()) + " components, RCPM {4:+0, 11:+7} -> rc" +
                  std::to_string(rc1) + ", rc1 searched once by each DAG variant");
}

Outcome criterion3(const std::vector<RandomInstance>& corpus) {
    Check c;
    auto t0 = Clock::now();
    std::size_t checks = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const DocumentTree& doc = corpus[i].doc;
        TreeIndex tree = build_tree_index(doc);
        IdCluster cl = build_idcluster(doc);
        for (const Query& q : corpus[i].queries) {
            Ids s = oracle::slca(doc, q), e = oracle::elca(doc, q);
            for (BenchAlgorithm a : all_bench_algorithms()) {
                Ids got = run_algorithm(a, tree, cl, q);
                c.expect(got == (semantics_of(a) == Semantics::Slca ? s : e),
                         std::string(to_string(a)) + " on doc " + std::to_string(i));
                ++checks;
            }
        }
    }
    double secs = seconds_since(t0);
    c.expect(secs < 60.0, "suite took " + fmt("%.1f s", secs));
    return c.done(std::to_string(corpus.size()) + " docs, " + std::to_string(checks) + " comparisons, " +
                  fmt("%.1f s", secs));
}

Outcome criterion4(const std::vector<RandomInstance>& corpus) {
    Check c;
    std::size_t shared = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        CompressedDag dag = compress(corpus[i].doc);
        shared += dag.size() < std::size_t(corpus[i].doc.size());
        try {
            c.expect(unfold(dag) == corpus[i].doc, "doc " + std::to_string(i) + " differs after unfold");
        } catch (const std::exception& e) {
            c.expect(false, "doc " + std::to_string(i) + ": " + e.what());
        }
    }
    return c.done(std::to_string(corpus.size()) + " docs identical after unfold (" + std::to_string(shared) +
                  " with shared subtrees)");
}

Outcome criterion5(const std::vector<RandomInstance>& corpus) {
    Check c;
    std::size_t n = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for (const Query& q : corpus[i].queries) {
            Ids ca = oracle::ca(corpus[i].doc, q), e = oracle::elca(corpus[i].doc, q), s = oracle::slca(corpus[i].doc, q);
            c.expect(std::includes(e.begin(), e.end(), s.begin(), s.end()), "SLCA not in ELCA, doc " + std::to_string(i));
            c.expect(std::includes(ca.begin(), ca.end(), e.begin(), e.end()), "ELCA not in CA, doc " + std::to_string(i));
            ++n;
        }
    return c.done(std::to_string(n) + " instances");
}

Outcome criterion6() {
    Check c;
    DocumentTree t = parse_document(generate_corpus({.seed = 6, .records = 3000, .duplicate_ratio = 0.5}));
    TreeIndex tree = build_tree_index(t);
    IdCluster cl = build_idcluster(t);
    SavingsStats s = savings_report(tree, cl);

    std::uint64_t tree_entries = 0, cluster_entries = 0;
    for (KeywordId w = 0; w < tree.vocabulary().size(); ++w) tree_entries += tree.list(w).size();
    for (const auto& comp : cl.components())
        for (const auto& l : comp.lists) cluster_entries += l.ids.size();
    std::uint64_t rcpm = cl.rcpm().size();

    c.expect(cluster_entries < tree_entries, "cluster entries not below tree entries");
    c.expect(s.tree_entries == tree_entries && s.cluster_entries == cluster_entries && s.rcpm_entries == rcpm,
             "entry counts differ from recount");
    c.expect(s.tree_bytes_slca == tree_entries * 2 * 4, "tree SLCA bytes");
    c.expect(s.tree_bytes_elca == tree_entries * 3 * 4, "tree ELCA bytes");
    c.expect(s.cluster_bytes_slca == cluster_entries * 2 * 4 + rcpm * 2 * 4, "cluster SLCA bytes");
    c.expect(s.cluster_bytes_elca == cluster_entries * 3 * 4 + rcpm * 2 * 4, "cluster ELCA bytes");
    c.expect(s.rcpm_bytes == rcpm * 2 * 4, "RCPM bytes");
    return c.done("tree " + std::to_string(tree_entries) + " entries, cluster " + std::to_string(cluster_entries) +
                  " + " + std::to_string(rcpm) + " RCPM (" + fmt("%.1f%% saved", s.entry_saving) +
                  "), bytes match cost model");
}

struct CategoryTimes {
    double tree = 0, dag = 0;
    std::size_t queries = 0;
};

Outcome criterion7(const Params& p) {
    Check c;
    auto t0 = Clock::now();
    CorpusOptions o{.seed = p.seed, .records = 0, .target_bytes = std::size_t(p.corpus_mb * 1e6),
                    .duplicate_ratio = p.perf_dup_ratio};
    TreeIndex tree;
    IdCluster cl;
    {
        std::string xml = generate_corpus(o);
        DocumentTree doc = parse_document(xml);
        std::cout << "  corpus: " << fmt("%.1f MB", xml.size() / 1e6) << ", " << doc.size() << " nodes\n";
        tree = build_tree_index(doc);
        cl = build_idcluster(doc);
    }
    double build_s = seconds_since(t0);
    auto reports = run_bench(tree, cl, default_corpus_queries(),
                             {.runs = p.runs, .algorithms = {BenchAlgorithm::FwdSlca, BenchAlgorithm::DagFwdSlca}});
    CategoryTimes by_cat[4];
    for (const auto& r : reports) {
        double ft = r.timing(BenchAlgorithm::FwdSlca)->mean_ms, dt = r.timing(BenchAlgorithm::DagFwdSlca)->mean_ms;
        auto& ct = by_cat[int(r.category)];
        ct.tree += ft;
        ct.dag += dt;
        ++ct.queries;
        std::cout << "  " << to_string(r.category) << "  " << join_keywords(r.keywords) << ": FwdSLCA "
                  << fmt("%.3f ms", ft) << ", DagFwdSLCA " << fmt("%.3f ms", dt) << fmt(" (%.2fx)", dt / ft) << '\n';
    }
    double total_s = seconds_since(t0);
    c.expect(p.runs >= 100, "fewer than 100 runs");
    c.expect(by_cat[3].queries > 0 && by_cat[1].queries > 0, "missing Cat1 or Cat3 queries");
    double r3 = by_cat[3].dag / by_cat[3].tree, r1 = by_cat[1].dag / by_cat[1].tree;
    c.expect(r3 <= 0.75, "Cat3 ratio " + fmt("%.3f", r3) + " > 0.75");
    c.expect(r1 <= 1.3, "Cat1 ratio " + fmt("%.3f", r1) + " > 1.3");
    c.expect(total_s < 600, "bench took " + fmt("%.0f s", total_s));
    return c.done("Cat3 dag/tree " + fmt("%.3f", r3) + " (<= 0.75), Cat1 " + fmt("%.3f", r1) + " (<= 1.3), " +
                  std::to_string(p.runs) + " runs, build " + fmt("%.0f s", build_s) + ", total " +
                  fmt("%.0f s", total_s));
}

Outcome criterion8(const Params& p) {
    Check c;
    idcluster::testing::TreeGen gen(p.seed + 8);
    auto dir = std::filesystem::temp_directory_path() / ("idcx_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::string path = (dir / "x.idx").string();
    for (int i = 0; i < 100; ++i) {
        DocumentTree t = gen.document({.duplicate_probability = gen.real() * 0.8});
        TreeIndex tree = build_tree_index(t);
        IdCluster cl = build_idcluster(t);
        c.expect(save(tree, path) == expected_file_size(tree), "tree size");
        c.expect(std::get<TreeIndex>(load(path)) == tree, "tree round trip " + std::to_string(i));
        c.expect(save(cl, path) == expected_file_size(cl), "cluster size");
        c.expect(std::get<IdCluster>(load(path)) == cl, "cluster round trip " + std::to_string(i));
    }
    std::string good = serialize(build_idcluster(parse_document_file(idcluster::testing::fixture_path("fig1.xml"))));
    auto rejects = [&](std::string bytes, auto tag, const std::string& what) {
        try {
            deserialize(bytes);
            c.expect(false, what + " accepted");
        } catch (const decltype(tag)&) {
        } catch (const std::exception& e) {
            c.expect(false, what + ": wrong error " + e.what());
        }
    };
    std::string bad = good;
    bad[1] = '?';
    rejects(bad, CorruptFileError(""), "bad magic");
    rejects(good.substr(0, good.size() - 3), CorruptFileError(""), "truncated file");
    rejects(good + "junk", CorruptFileError(""), "trailing bytes");
    bad = good;
    bad[4] = 2;
    rejects(bad, VersionMismatchError(""), "version 2");
    std::filesystem::remove_all(dir);
    return c.done("100 tree + 100 cluster round trips, corrupt and version mismatch rejected");
}

Outcome criterion9() {
    Check c;
    {
        IdCluster cl = build_idcluster(parse_document("<r><a>x</a><s><b>y</b></s><s><b>y</b></s></r>"));
        Query q{"x", "y"};
        for (BenchAlgorithm a : {BenchAlgorithm::DagFwdSlca, BenchAlgorithm::DagBwdSlcaPlus}) {
            DagSearchStats st;
            Ids got = run_algorithm(a, TreeIndex{}, cl, q, &st);
            c.expect(got == Ids{1}, std::string("(a) ") + to_string(a) + " gave " + ids_str(got));
            c.expect(st.searches.size() == 1, std::string("(a) ") + to_string(a) + " expanded the RCPM");
        }
    }
    {
        std::string s = "<s>x y<b>x y</b></s>";
        DocumentTree t = parse_document("<r>x y<a>x y</a>" + s + s + "</r>");
        IdCluster cl = build_idcluster(t);
        Query q{"x", "y"};
        Ids want = oracle::elca(t, q);
        c.expect(want == Ids{1, 2, 3, 4, 5, 6}, "(b) oracle gave " + ids_str(want));
        for (BenchAlgorithm a : {BenchAlgorithm::DagFwdElca, BenchAlgorithm::DagBwdElca}) {
            Ids got = run_algorithm(a, TreeIndex{}, cl, q);
            c.expect(got == want, std::string("(b) ") + to_string(a) + " gave " + ids_str(got));
        }
    }
    return c.done("(a) root-only SLCA returns {1} with no expansion; (b) component-root ELCAs kept");
}

}  // namespace

int main(int argc, char** argv) {
    Params p;
    std::set<int> only;
    CLI::App app{"Acceptance checks"};
    app.add_option("--docs", p.random_docs, "random documents for criteria 3-5")->check(CLI::Range(1000, 1000000));
    app.add_option("--corpus-mb", p.corpus_mb, "criterion 7 corpus size");
    app.add_option("--perf-dup-ratio", p.perf_dup_ratio, "criterion 7 corpus duplicate ratio");
    app.add_option("--runs", p.runs, "criterion 7 timed runs");
    app.add_option("--seed", p.seed);
    app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    std::vector<RandomInstance> corpus;
    auto need_corpus = [&] { return only.empty() || only.count(3) || only.count(4) || only.count(5); };
    if (need_corpus()) corpus = random_corpus(p);

    std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, criterion1},
        {2, criterion2},
        {3, [&] { return criterion3(corpus); }},
        {4, [&] { return criterion4(corpus); }},
        {5, [&] { return criterion5(corpus); }},
        {6, criterion6},
        {7, [&] { return criterion7(p); }},
        {8, [&] { return criterion8(p); }},
        {9, criterion9},
    };
    int failed = 0;
    for (auto& [n, fn] : criteria) {
        if (!only.empty() && !only.count(n)) continue;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
