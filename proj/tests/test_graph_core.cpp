#include <doctest.h>

#include <stdexcept>

#include <set>

#include "oracles/naive_metrics.hpp"
#include "relnas/graph.hpp"
#include "relnas/rng.hpp"

using namespace relnas;

namespace {

Graph complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    return Graph(n, edges);
}

Graph cycle(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, n - 1);
    return Graph(n, edges);
}

Graph path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, edges);
}

Graph star(int leaves) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return Graph(leaves + 1, edges);
}

}  // namespace

TEST_SUITE("graph-core") {

TEST_CASE("graph construction validates") {
    CHECK_THROWS_AS(Graph(0), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);

    Graph g(4, {{0, 1}, {2, 3}});
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(1, 0));
    CHECK(!g.has_edge(0, 2));
}

TEST_CASE("degree sequence") {
    CHECK(degree_sequence(complete(4)) == std::vector<int>{3, 3, 3, 3});
    CHECK(degree_sequence(star(4)) == std::vector<int>{4, 1, 1, 1, 1});
    CHECK(degree_sequence(Graph(3)) == std::vector<int>{0, 0, 0});
}

TEST_CASE("degree sum equals 2m on random graphs") {
    Rng rng = make_rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracle::random_connected(uniform_int(rng, 3, 12), 0.4, rng);
        const auto deg = degree_sequence(g);
        int sum = 0;
        for (int d : deg) sum += d;
        CHECK(sum == 2 * g.edge_count());
    }
}

TEST_CASE("all pairs shortest paths fixtures") {
    const DistanceMatrix d5 = all_pairs_shortest_paths(cycle(5));
    for (int i = 0; i < 5; ++i) {
        std::multiset<int> row;
        for (int j = 0; j < 5; ++j) row.insert(d5.hops(i, j));
        CHECK(row == std::multiset<int>{0, 1, 1, 2, 2});
    }

    const DistanceMatrix dk = all_pairs_shortest_paths(complete(4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) CHECK(dk.hops(i, j) == (i == j ? 0 : 1));
    }

    const DistanceMatrix iso = all_pairs_shortest_paths(Graph(2));
    CHECK(!iso.reachable(0, 1));
    CHECK(iso.reachable(0, 0));
}

TEST_CASE("apsp agrees with Floyd-Warshall oracle") {
    Rng rng = make_rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = uniform_int(rng, 2, 12);
        // Possibly disconnected: drop the connectivity retry.
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u) {
            for (int v = u + 1; v < n; ++v) {
                if (uniform_real(rng) < 0.3) edges.emplace_back(u, v);
            }
        }
        const Graph g(n, edges);
        const DistanceMatrix d = all_pairs_shortest_paths(g);
        const auto fw = oracle::floyd_warshall(g);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (fw[i][j] < 0) {
                    CHECK(!d.reachable(i, j));
                } else {
                    REQUIRE(d.reachable(i, j));
                    CHECK(d.hops(i, j) == fw[i][j]);
                }
            }
        }
    }
}

TEST_CASE("is_connected") {
    CHECK(is_connected(cycle(5)));
    CHECK(!is_connected(Graph(4, {{0, 1}, {2, 3}})));
    CHECK(is_connected(Graph(1)));
}

TEST_CASE("vertex connectivity fixtures") {
    for (int s = 0; s < 4; ++s) {
        for (int t = s + 1; t < 4; ++t) {
            CHECK(max_flow_vertex_connectivity(complete(4), s, t) == 3);
        }
    }
    for (int t = 1; t < 5; ++t) {
        CHECK(max_flow_vertex_connectivity(cycle(5), 0, t) == 2);
    }
    CHECK(max_flow_vertex_connectivity(path(3), 0, 2) == 1);
    CHECK_THROWS_AS(max_flow_vertex_connectivity(path(3), 1, 1), std::invalid_argument);
}

TEST_CASE("vertex connectivity matches separator enumeration") {
    Rng rng = make_rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = uniform_int(rng, 4, 8);
        const Graph g = oracle::random_connected(n, 0.45, rng);
        for (int s = 0; s < n; ++s) {
            for (int t = s + 1; t < n; ++t) {
                CHECK(max_flow_vertex_connectivity(g, s, t) ==
                      oracle::vertex_connectivity_brute(g, s, t));
            }
        }
    }
}

TEST_CASE("edge max flow matches cut enumeration") {
    Rng rng = make_rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = uniform_int(rng, 4, 9);
        const Graph g = oracle::random_connected(n, 0.4, rng);
        for (int t = 1; t < n; ++t) {
            CHECK(edge_max_flow(g, 0, t) == oracle::st_edge_cut_brute(g, 0, t));
        }
    }
}

TEST_CASE("edit operations return modified copies") {
    const Graph g = cycle(4);
    const Graph plus = g.with_edge(0, 2);
    CHECK(plus.edge_count() == 5);
    CHECK(g.edge_count() == 4);
    const Graph minus = g.without_edge(0, 1);
    CHECK(minus.edge_count() == 3);
    CHECK_THROWS_AS(g.with_edge(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.without_edge(0, 2), std::invalid_argument);
}

}  // TEST_SUITE
