#include <gtest/gtest.h>

#include "idcluster/oracle.hpp"
#include "support/random_tree.hpp"

using namespace idcluster;
using idcluster::testing::fixture_path;
using Ids = std::vector<NodeId>;

namespace {
const std::vector<std::string> kUsaEnglish{"USA", "English"};
}

TEST(Oracle, FixtureWorkedExample) {
    DocumentTree t = parse_document_file(fixture_path("fig1.xml"));
    EXPECT_EQ(oracle::ca(t, kUsaEnglish), (Ids{1, 2, 4, 5, 11, 12}));
    EXPECT_EQ(oracle::slca(t, kUsaEnglish), (Ids{5, 12}));
    EXPECT_EQ(oracle::elca(t, kUsaEnglish), (Ids{2, 5, 12}));
}

TEST(Oracle, SingleKeywordQueryReturnsHolders) {
    DocumentTree t = parse_document_file(fixture_path("fig1.xml"));
    std::vector<std::string> q{"USA"};
    EXPECT_EQ(oracle::slca(t, q), (Ids{5, 9, 12}));
    EXPECT_EQ(oracle::elca(t, q), (Ids{5, 9, 12}));
}

TEST(Oracle, MissingKeywordGivesEmptyResult) {
    DocumentTree t = parse_document_file(fixture_path("fig1.xml"));
    std::vector<std::string> q{"USA", "Germany"};
    EXPECT_TRUE(oracle::ca(t, q).empty());
    EXPECT_TRUE(oracle::slca(t, q).empty());
    EXPECT_TRUE(oracle::elca(t, q).empty());
}

// r(1) > [a(2) > [x(3), y(4)], b(5) "x" > [y(6)], x(7)]. With the subtree of
// 2 removed, the root still sees x at 7 but y only below 5, which is itself a
// CA, so the root is not an ELCA.
TEST(Oracle, HandBuiltElcaCases) {
    DocumentTree t = parse_document("<r><a><x/><y/></a><b>x<y/></b><x/></r>");
    std::vector<std::string> q{"x", "y"};
    EXPECT_EQ(oracle::ca(t, q), (Ids{1, 2, 5}));
    EXPECT_EQ(oracle::slca(t, q), (Ids{2, 5}));
    EXPECT_EQ(oracle::elca(t, q), (Ids{2, 5}));

    DocumentTree u = parse_document("<r><a><x/><y/></a><x/><y/></r>");
    EXPECT_EQ(oracle::elca(u, q), (Ids{1, 2}));
    EXPECT_EQ(oracle::slca(u, q), (Ids{2}));
}

TEST(Oracle, RootOnlyResult) {
    DocumentTree t = parse_document("<r><x/><y/></r>");
    std::vector<std::string> q{"x", "y"};
    EXPECT_EQ(oracle::slca(t, q), (Ids{1}));
    EXPECT_EQ(oracle::elca(t, q), (Ids{1}));
}

TEST(Oracle, ContainmentChainOnRandomDocuments) {
    idcluster::testing::TreeGen gen(5);
    for (int i = 0; i < 100; ++i) {
        DocumentTree t = gen.document({});
        auto q = gen.query();
        auto c = oracle::ca(t, q), e = oracle::elca(t, q), s = oracle::slca(t, q);
        ASSERT_TRUE(std::includes(c.begin(), c.end(), e.begin(), e.end()));
        ASSERT_TRUE(std::includes(e.begin(), e.end(), s.begin(), s.end()));
        ASSERT_EQ(c.empty(), s.empty());
    }
}
