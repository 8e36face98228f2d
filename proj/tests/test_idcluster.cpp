#include <gtest/gtest.h>

#include <map>
#include <set>

#include "idcluster/idcluster.hpp"
#include "support/random_tree.hpp"

using namespace idcluster;
using idcluster::testing::fixture_path;
using Ids = std::vector<NodeId>;

namespace {

// Expand component c's list for w through dummies, recursively.
void expand(const IdCluster& cl, std::uint32_t c, KeywordId w, std::int64_t shift, std::set<NodeId>& out) {
    const IdList* l = cl.component(c).find(w);
    if (!l) return;
    for (NodeId id : l->ids) {
        if (cl.is_dummy(c, id)) {
            const RcpmEntry* e = cl.rcpm_find(id);
            expand(cl, e->component, w, shift + e->offset, out);
        } else {
            out.insert(static_cast<NodeId>(id + shift));
        }
    }
}

}  // namespace

TEST(IdCluster, FixtureComponentsAndRcpm) {
    IdCluster cl = build_idcluster(parse_document_file(fixture_path("fig1.xml")));
    ASSERT_EQ(cl.components().size(), 2u);
    EXPECT_EQ(cl.component(0).root, 1);
    EXPECT_EQ(cl.component(0).occurrence_count, 1u);
    EXPECT_EQ(cl.component(0).members, (Ids{1, 2, 3, 9, 10}));
    EXPECT_EQ(cl.component(1).root, 4);
    EXPECT_EQ(cl.component(1).occurrence_count, 2u);
    EXPECT_EQ(cl.component(1).members, (Ids{4, 5, 6, 7, 8}));
    EXPECT_EQ(cl.rcpm(), (std::vector<RcpmEntry>{{4, 1, 0}, {11, 1, 7}}));

    KeywordId usa = *cl.vocabulary().find("USA");
    const IdList* root_usa = cl.component(0).find(usa);
    ASSERT_NE(root_usa, nullptr);
    EXPECT_EQ(root_usa->ids, (Ids{1, 2, 4, 9, 11}));
    EXPECT_EQ(root_usa->pid_pos, (std::vector<std::int32_t>{-1, 0, 1, 1, 0}));
    EXPECT_EQ(cl.component(1).find(usa)->ids, (Ids{4, 5}));
    EXPECT_TRUE(cl.is_dummy(0, 4));
    EXPECT_FALSE(cl.is_dummy(1, 4));
}

TEST(IdCluster, RcpmLookupMissesNonDummies) {
    IdCluster cl = build_idcluster(parse_document_file(fixture_path("fig1.xml")));
    for (NodeId id = -1; id <= 20; ++id) {
        const RcpmEntry* e = cl.rcpm_find(id);
        if (id == 4 || id == 11) {
            ASSERT_NE(e, nullptr);
            EXPECT_EQ(e->dummy_id, id);
        } else {
            EXPECT_EQ(e, nullptr) << id;
        }
    }
}

TEST(IdCluster, RedundancyFreeDocumentHasOneComponent) {
    DocumentTree t = parse_document("<r><a>x</a><b>y</b></r>");
    IdCluster cl = build_idcluster(t);
    EXPECT_EQ(cl.components().size(), 1u);
    EXPECT_TRUE(cl.rcpm().empty());
    SavingsStats s = savings_report(build_tree_index(t), cl);
    for (const auto& k : s.keywords) {
        EXPECT_EQ(k.s_path, 0.0) << k.keyword;
        EXPECT_EQ(k.s_nodes, 0.0) << k.keyword;
    }
}

// Two copies of one record: direct holders halve, dummies cost one entry
// per keyword per copy.
TEST(IdCluster, TwoCopiesHalveNodeCounts) {
    std::string rec = "<rec><a>p q</a><b>q r</b><c><d>s</d></c></rec>";
    DocumentTree t = parse_document("<root>" + rec + rec + "</root>");
    SavingsStats s = savings_report(build_tree_index(t), build_idcluster(t));
    for (const auto& k : s.keywords) {
        if (k.keyword == "root") continue;
        EXPECT_EQ(k.cluster_nodes * 2, k.tree_nodes) << k.keyword;
        EXPECT_DOUBLE_EQ(k.s_nodes, 50.0) << k.keyword;
        // tree: root + path in both copies; cluster: root + 2 dummies + one path
        ASSERT_EQ(k.tree_path % 2, 1u);
        EXPECT_EQ(k.cluster_path, 3 + (k.tree_path - 1) / 2) << k.keyword;
    }
}

TEST(IdCluster, SavingsMatchRecountAndCostModel) {
    idcluster::testing::TreeGen gen(41);
    std::vector<DocumentTree> docs;
    docs.push_back(parse_document_file(fixture_path("fig1.xml")));
    for (int i = 0; i < 40; ++i) docs.push_back(gen.document({.duplicate_probability = gen.real() * 0.8}));
    for (const auto& t : docs) {
        TreeIndex tree = build_tree_index(t);
        IdCluster cl = build_idcluster(t);
        SavingsStats s = savings_report(tree, cl);
        std::size_t tree_entries = 0, cluster_entries = 0, dummies = 0;
        for (KeywordId w = 0; w < tree.vocabulary().size(); ++w) tree_entries += tree.list(w).size();
        for (std::uint32_t c = 0; c < cl.components().size(); ++c)
            for (const auto& l : cl.component(c).lists) {
                cluster_entries += l.size();
                for (NodeId id : l.ids) dummies += cl.is_dummy(c, id);
            }
        ASSERT_EQ(s.tree_entries, tree_entries);
        ASSERT_EQ(s.cluster_entries, cluster_entries);
        ASSERT_EQ(s.dummy_entries, dummies);
        ASSERT_EQ(s.rcpm_entries, cl.rcpm().size());
        ASSERT_EQ(s.components, cl.components().size());
        ASSERT_EQ(s.tree_bytes_slca, 8 * tree_entries);
        ASSERT_EQ(s.tree_bytes_elca, 12 * tree_entries);
        ASSERT_EQ(s.cluster_bytes_slca, 8 * cluster_entries + 8 * cl.rcpm().size());
        ASSERT_EQ(s.cluster_bytes_elca, 12 * cluster_entries + 8 * cl.rcpm().size());
        ASSERT_EQ(s.rcpm_bytes, 8 * cl.rcpm().size());

        std::map<std::string, std::size_t> holders;
        for (NodeId n = 1; n <= t.size(); ++n)
            for (KeywordId w : t.keywords(n)) ++holders[t.vocabulary().word(w)];
        for (const auto& k : s.keywords) ASSERT_EQ(k.tree_nodes, holders[k.keyword]) << k.keyword;
    }
}

TEST(IdCluster, MismatchedDocumentsAreRejected) {
    TreeIndex a = build_tree_index(parse_document("<r><a/></r>"));
    IdCluster b = build_idcluster(parse_document("<r><a/><b/></r>"));
    EXPECT_THROW(savings_report(a, b), std::invalid_argument);
}

TEST(IdCluster, ComponentsPartitionTheDag) {
    idcluster::testing::TreeGen gen(43);
    for (int i = 0; i < 60; ++i) {
        CompressedDag dag = compress(gen.document({.duplicate_probability = gen.real() * 0.8}));
        IdCluster cl = build_idcluster(dag);
        std::map<NodeId, std::uint32_t> owner;
        for (std::uint32_t c = 0; c < cl.components().size(); ++c)
            for (NodeId m : cl.component(c).members) ASSERT_TRUE(owner.emplace(m, c).second) << "node in two components";
        ASSERT_EQ(owner.size(), dag.size());
        ASSERT_EQ(cl.component(0).root, 1);
        for (std::uint32_t v = 0; v < dag.size(); ++v) {
            std::uint32_t c = owner.at(dag.node(v).id);
            ASSERT_EQ(dag.node(v).occurrence_count, cl.component(c).occurrence_count);
            // A parent-child edge stays inside a component iff counts agree.
            for (const auto& e : dag.children(v)) {
                bool same = dag.node(e.target).occurrence_count == dag.node(v).occurrence_count;
                ASSERT_EQ(owner.at(dag.node(e.target).id) == c, same);
            }
        }
        ASSERT_TRUE(std::is_sorted(cl.rcpm().begin(), cl.rcpm().end(),
                                   [](const RcpmEntry& a, const RcpmEntry& b) { return a.dummy_id < b.dummy_id; }));
    }
}

TEST(IdCluster, DummiesExpandToTreeLists) {
    idcluster::testing::TreeGen gen(47);
    for (int i = 0; i < 60; ++i) {
        DocumentTree t = gen.document({.duplicate_probability = gen.real() * 0.8});
        TreeIndex tree = build_tree_index(t);
        IdCluster cl = build_idcluster(t);
        for (KeywordId w = 0; w < tree.vocabulary().size(); ++w) {
            std::set<NodeId> got;
            expand(cl, 0, *cl.vocabulary().find(tree.vocabulary().word(w)), 0, got);
            const auto& ids = tree.list(w).ids;
            ASSERT_EQ(Ids(got.begin(), got.end()), ids) << tree.vocabulary().word(w);
        }
    }
}

TEST(IdCluster, ConstructorValidatesRcpm) {
    IdCluster cl = build_idcluster(parse_document_file(fixture_path("fig1.xml")));
    auto make = [&](std::vector<RcpmEntry> rcpm) {
        return IdCluster(cl.vocabulary(), cl.components(), std::move(rcpm), cl.node_count());
    };
    EXPECT_EQ(make(cl.rcpm()), cl);
    EXPECT_THROW(make({{4, 1, 0}, {11, 1, 6}}), std::invalid_argument);  // offset must be 11 - 4
    EXPECT_THROW(make({{11, 1, 7}, {4, 1, 0}}), std::invalid_argument);  // unsorted
    EXPECT_THROW(make({{4, 9, 0}}), std::invalid_argument);              // unknown component
    EXPECT_THROW(make({{99, 1, 95}}), std::invalid_argument);            // id out of range
}
