#include "test_util.hpp"

using namespace mgf;

namespace {
bool throws_kind(const std::string& text, error_kind k) {
    try {
        MultiGraph::parse(text);
    } catch (const error& e) {
        return e.kind() == k;
    }
    return false;
}
} // namespace

TEST(MultiGraphParse, Basics) {
    MultiGraph g = MultiGraph::parse("1-2:5, 2-3:1; 1-3");
    EXPECT_EQ(g.n(), 3);
    EXPECT_EQ(g.weight(), 7);
    EXPECT_EQ(g.multiplicity(0, 1), 5);
    EXPECT_EQ(g.multiplicity(2, 1), 1);
    EXPECT_EQ(g.degree(0), 6);
    EXPECT_EQ(g.str(), "1-2:5, 1-3:1, 2-3:1");
    EXPECT_EQ(MultiGraph::parse(g.str()), g);
    // orientation and repetition
    EXPECT_EQ(MultiGraph::parse("2-1:2, 1-2:3"), banana_graph(5));
}

TEST(MultiGraphParse, Errors) {
    EXPECT_TRUE(throws_kind("1-1:2", error_kind::InvalidGraph)) << "1-1:2";
    EXPECT_TRUE(throws_kind("1-2:0", error_kind::InvalidGraph)) << "1-2:0";
    EXPECT_TRUE(throws_kind("1-2, 3-4", error_kind::InvalidGraph)) << "1-2, 3-4";
    EXPECT_TRUE(throws_kind("0-1", error_kind::InvalidGraph)) << "0-1";
    EXPECT_TRUE(throws_kind("1=2", error_kind::ParseError)) << "1=2";
    EXPECT_TRUE(throws_kind("1-2:x", error_kind::ParseError)) << "1-2:x";
    EXPECT_TRUE(throws_kind("", error_kind::ParseError)) << "";
    EXPECT_TRUE(throws_kind("1-2:3 junk", error_kind::ParseError)) << "1-2:3 junk";
}

TEST(MultiGraph, CanonicalKey) {
    MultiGraph a = MultiGraph::parse("1-2:2, 2-3:1, 1-3:1");
    MultiGraph b = MultiGraph::parse("1-3, 2-3, 1-2:2");
    MultiGraph c = MultiGraph::parse("1-2:1, 2-3:2, 1-3:1");
    EXPECT_EQ(a.canonical_key(), b.canonical_key());
    EXPECT_NE(a.canonical_key(), c.canonical_key());
}

TEST(Incidence, ColumnsAndSigns) {
    MultiGraph g = MultiGraph::parse("1-2:2, 2-3, 1-3");
    IncidenceMatrix m = incidence(g);
    ASSERT_EQ(m.rows(), 3);
    ASSERT_EQ(m.cols(), 4);
    for (int c = 0; c < m.cols(); ++c) {
        int sum = 0, nz = 0;
        for (int r = 0; r < m.rows(); ++r) {
            sum += m.entries[r][c];
            nz += m.entries[r][c] != 0;
        }
        EXPECT_EQ(sum, 0);
        EXPECT_EQ(nz, 2);
        EXPECT_EQ(m.entries[m.edges[c].first][c], 1);
    }
    EXPECT_EQ(m.edges[0], m.edges[1]);
    EXPECT_EQ(loop_count(g), 2);
}

TEST(Reducibility, BridgesAndCutVertices) {
    MultiGraph tree = MultiGraph::parse("1-2:2, 2-3:1, 3-4:2");
    auto br = bridges(tree);
    ASSERT_EQ(br.size(), 1u);
    EXPECT_EQ(br[0], MultiGraph::pair_t(1, 2));
    EXPECT_TRUE(is_one_particle_reducible(tree));
    EXPECT_FALSE(is_one_particle_reducible(cycle_graph(4)));

    MultiGraph bow = MultiGraph::parse("1-2:2, 2-3:3");
    auto parts = cut_vertex_factor(bow);
    ASSERT_EQ(parts.size(), 2u);
    int w = 0;
    for (const auto& p : parts) {
        EXPECT_EQ(p.n(), 2);
        w += p.weight();
    }
    EXPECT_EQ(w, 5);
    EXPECT_TRUE(is_vertex_reducible(bow));
    EXPECT_FALSE(is_vertex_reducible(MultiGraph::parse("1-2:5, 2-3, 1-3")));
    // figure eight of two triangles sharing vertex 1
    auto eight = cut_vertex_factor(MultiGraph::parse("1-2, 2-3, 1-3, 1-4, 4-5, 1-5"));
    EXPECT_EQ(eight.size(), 2u);
}

TEST(Chains, CycleReducesToEdge) {
    WeightedGraph w = reduce_chains(WeightedGraph::from(cycle_graph(5)));
    EXPECT_EQ(w.n, 2);
    ASSERT_EQ(w.edges.size(), 1u);
    std::vector<int> orders = w.edges.begin()->second;
    ASSERT_EQ(orders.size(), 2u);
    EXPECT_EQ(orders[0] + orders[1], 5);
    EXPECT_EQ(w.weight(), 5);
}

TEST(Chains, TetrahedralGraphLeft) {
    // "1-2:2, 2-3, 3-4, 4-1": the path 2-3-4-1 collapses to one G_3 edge
    WeightedGraph w = reduce_chains(WeightedGraph::from(MultiGraph::parse("1-2:2, 2-3:1, 3-4:1, 4-1:1")));
    EXPECT_EQ(w.n, 2);
    std::vector<int> orders = w.edges.begin()->second;
    std::sort(orders.begin(), orders.end());
    EXPECT_EQ(orders, (std::vector<int>{1, 1, 3}));
    // trivalent vertices are left alone
    WeightedGraph k4 = reduce_chains(WeightedGraph::from(MultiGraph::parse("1-2,1-3,1-4,2-3,2-4,3-4")));
    EXPECT_EQ(k4.n, 4);
}
