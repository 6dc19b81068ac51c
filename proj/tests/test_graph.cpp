#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "wlforge/graph.hpp"
#include "wlforge/higher_order.hpp"
#include "wlforge/rng.hpp"

using namespace wlforge;

TEST_CASE("graph construction validates its invariants") {
    CHECK_THROWS_AS(Graph::unlabeled(2, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::unlabeled(2, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::unlabeled(2, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(2, {}, {0}), std::invalid_argument);

    const Graph g = Graph::unlabeled(3, {{2, 0}, {0, 1}});
    CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
}

TEST_CASE("neighbors are sorted and validated") {
    const Graph p3 = fixtures::path(3);
    CHECK(p3.neighbors(1) == std::vector<int>{0, 2});
    CHECK(fixtures::complete(4).neighbors(0) == std::vector<int>{1, 2, 3});
    CHECK(Graph::unlabeled(2, {}).neighbors(1).empty());
    CHECK_THROWS_AS(p3.neighbors(3), std::invalid_argument);
}

TEST_CASE("induced subgraphs re-index and carry labels") {
    const Graph tri = fixtures::complete(3);
    const Graph edge = induced_subgraph(tri, KSet({0, 1}));
    CHECK(edge.node_count() == 2);
    CHECK(edge.edge_count() == 1);

    const Graph p3 = fixtures::path(3);
    const Graph ends = induced_subgraph(p3, KSet({0, 2}));
    CHECK(ends.node_count() == 2);
    CHECK(ends.edge_count() == 0);

    const Graph k4_tri = induced_subgraph(fixtures::complete(4), KSet({0, 1, 2}));
    CHECK(is_isomorphic_bruteforce(k4_tri, tri));

    const Graph labeled(3, {{0, 1}}, {5, 6, 7});
    const Graph sub = induced_subgraph(labeled, KSet({1, 2}));
    CHECK(sub.labels() == std::vector<int>{6, 7});
}

TEST_CASE("enumerate_ksets is lexicographic and complete") {
    auto pairs = enumerate_ksets(3, 2);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].members == std::vector<int>{0, 1});
    CHECK(pairs[1].members == std::vector<int>{0, 2});
    CHECK(pairs[2].members == std::vector<int>{1, 2});

    CHECK(enumerate_ksets(4, 3).size() == 4);
    CHECK(enumerate_ksets(5, 2).size() == 10);
    CHECK_THROWS_AS(enumerate_ksets(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_ksets(3, 1), std::invalid_argument);

    SUBCASE("kset_index inverts the enumeration") {
        for (int n : {4, 6, 7})
            for (int k : {2, 3}) {
                auto sets = enumerate_ksets(n, k);
                std::set<std::vector<int>> distinct;
                for (std::size_t i = 0; i < sets.size(); ++i) {
                    CHECK(kset_index(n, sets[i]) == i);
                    distinct.insert(sets[i].members);
                }
                CHECK(distinct.size() == binomial(n, k));
            }
    }
}

TEST_CASE("permute relabels structure-preservingly") {
    const Graph p3 = fixtures::path(3);
    CHECK(permute(p3, {0, 1, 2}) == p3);

    const Graph rev = permute(p3, {2, 1, 0});
    CHECK(is_isomorphic_bruteforce(p3, rev));
    CHECK(rev.neighbors(1) == std::vector<int>{0, 2});

    CHECK_THROWS_AS(permute(p3, {0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(permute(p3, {0, 1}), std::invalid_argument);

    SUBCASE("labels travel with nodes") {
        const Graph g(3, {{0, 1}}, {7, 8, 9});
        const Graph h = permute(g, {1, 2, 0});
        CHECK(h.label(1) == 7);
        CHECK(h.label(2) == 8);
        CHECK(h.label(0) == 9);
        CHECK(h.has_edge(1, 2));
    }
}

TEST_CASE("brute-force isomorphism oracle") {
    CHECK_FALSE(is_isomorphic_bruteforce(fixtures::cycle(6), fixtures::two_triangles()));
    CHECK_FALSE(is_isomorphic_bruteforce(fixtures::complete(3), fixtures::path(3)));

    SUBCASE("permuted copies are always isomorphic") {
        Rng rng(7);
        for (int trial = 0; trial < 30; ++trial) {
            const Graph g = random_graph(rng, rng.uniform_int(2, 8), 0.4, rng.uniform_int(1, 3));
            const Graph h = permute(g, random_permutation(rng, g.node_count()));
            CHECK(is_isomorphic_bruteforce(g, h));
        }
    }

    SUBCASE("label mismatch blocks isomorphism") {
        const Graph a(2, {{0, 1}}, {0, 0});
        const Graph b(2, {{0, 1}}, {0, 1});
        CHECK_FALSE(is_isomorphic_bruteforce(a, b));
    }
}

TEST_CASE("product graph on k-sets") {
    SUBCASE("triangle, k=2 gives K3 with equal labels") {
        const Graph prod = product_graph(fixtures::complete(3), 2);
        CHECK(prod.node_count() == 3);
        CHECK(prod.edge_count() == 3);
        CHECK(prod.labels() == std::vector<int>{0, 0, 0});
    }

    SUBCASE("P3, k=2: labels split edges from non-edges") {
        const Graph prod = product_graph(fixtures::path(3), 2);
        REQUIRE(prod.node_count() == 3);
        CHECK(prod.edge_count() == 3);
        // Sets in order: {0,1}, {0,2}, {1,2}; the middle one is the non-edge.
        CHECK(prod.label(0) == prod.label(2));
        CHECK(prod.label(0) != prod.label(1));
    }

    SUBCASE("every node has degree k(n-k)") {
        Rng rng(11);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = rng.uniform_int(4, 7);
            const int k = rng.uniform_int(2, 3);
            const Graph g = random_graph(rng, n, 0.5, 1);
            const Graph prod = product_graph(g, k);
            for (int v = 0; v < prod.node_count(); ++v) CHECK(prod.degree(v) == k * (n - k));
        }
    }
}

TEST_CASE("induced subgraph edges lift to the host graph") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_graph(rng, rng.uniform_int(4, 8), 0.5, 2);
        for (const KSet& s : enumerate_ksets(g, 3)) {
            const Graph sub = induced_subgraph(g, s);
            CHECK(sub.edge_count() <= 3);
            for (auto [u, v] : sub.edges()) CHECK(g.has_edge(s.members[u], s.members[v]));
        }
    }
}
