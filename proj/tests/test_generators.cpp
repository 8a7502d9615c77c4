#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <set>

#include "oracles/naive_metrics.hpp"
#include "relnas/generators.hpp"
#include "relnas/graph.hpp"
#include "relnas/metrics.hpp"

using namespace relnas;

TEST_SUITE("generators") {

TEST_CASE("ER with p=1 is complete") {
    const Graph g = generate(GeneratorSpec::er(5, 1.0, 123));
    CHECK(g.edge_count() == 10);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(generate(GeneratorSpec::ws_flex(8, 1.5, 0.1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(GeneratorSpec::ws_flex(8, 8.0, 0.1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(GeneratorSpec::ba(5, 5, 1)), std::invalid_argument);
    CHECK_THROWS_AS(generate(GeneratorSpec::er(5, 1.5, 1)), std::invalid_argument);
}

TEST_CASE("Harary H_{2,6} has the promised edge count and connectivity") {
    const Graph g = generate(GeneratorSpec::harary(6, 2));
    CHECK(g.edge_count() == 6);  // ceil(k*n/2)
    CHECK(is_connected(g));
    CHECK(oracle::edge_connectivity_brute(g) >= 2);
    // max-flow route agrees
    int edge_conn = 100;
    for (int t = 1; t < 6; ++t) edge_conn = std::min(edge_conn, edge_max_flow(g, 0, t));
    CHECK(edge_conn >= 2);
}

TEST_CASE("Harary constructions hit minimum edge counts for k >= 2") {
    for (int n : {5, 6, 7, 8, 11}) {
        for (int k = 2; k < n; ++k) {
            const Graph g = generate(GeneratorSpec::harary(n, k));
            CHECK(g.edge_count() == (k * n + 1) / 2);
            CHECK(oracle::edge_connectivity_brute(g) >= k);
        }
    }
}

TEST_CASE("WS-flex p=0 ring lattice has the target edge count") {
    const Graph g = generate(GeneratorSpec::ws_flex(64, 4.0, 0.0, 9));
    const double avg_degree = 2.0 * g.edge_count() / 64.0;
    CHECK(std::abs(avg_degree - 4.0) <= 1.0 / 64.0);
    CHECK(is_connected(g));
}

TEST_CASE("WS-flex p=0 with integer degree is near-regular") {
    for (int n : {8, 9, 12, 15, 64}) {
        for (int k = 2; k < n; k += (n > 16 ? 7 : 1)) {
            const Graph g = generate(GeneratorSpec::ws_flex(n, static_cast<double>(k), 0.0,
                                                            1000 + n * 100 + k));
            const auto deg = degree_sequence(g);
            const auto [lo, hi] = std::minmax_element(deg.begin(), deg.end());
            CHECK(*hi - *lo <= 1);
            CHECK(g.edge_count() == (k * n) / 2);
        }
    }
}

TEST_CASE("generation is deterministic in the spec") {
    const GeneratorSpec spec = GeneratorSpec::ws_flex(32, 6.5, 0.4, 777);
    CHECK(generate(spec) == generate(spec));
    const Graph other = generate(GeneratorSpec::ws_flex(32, 6.5, 0.4, 778));
    CHECK(!(generate(spec) == other));
}

TEST_CASE("BA tail exponent lands in a loose power-law band") {
    const Graph g = generate(GeneratorSpec::ba(2000, 2, 4242));
    CHECK(is_connected(g));
    CHECK(g.edge_count() == 2 * (2000 - 2));
    // Hill estimator on degrees >= 10.
    const int k_min = 10;
    double log_sum = 0.0;
    int count = 0;
    for (int d : degree_sequence(g)) {
        if (d >= k_min) {
            log_sum += std::log(static_cast<double>(d) / (k_min - 0.5));
            ++count;
        }
    }
    REQUIRE(count > 20);
    const double gamma = 1.0 + count / log_sum;
    CHECK(gamma >= 1.5);
    CHECK(gamma <= 4.5);
}

TEST_CASE("sweep produces the grid") {
    const GraphPool one = ws_flex_sweep(8, 2.0, 7.0, 1, 1, 1, 5);
    CHECK(one.size() == 1);

    const GraphPool pool = ws_flex_sweep(8, 2.0, 7.0, 3, 3, 2, 5);
    CHECK(pool.size() == 18);
    for (const PoolEntry& e : pool.entries) {
        CHECK(is_connected(e.graph));
        const double avg = 2.0 * e.graph.edge_count() / 8.0;
        CHECK(avg >= e.spec.degree - 1.0);
        CHECK(avg <= e.spec.degree + 1.0);
    }
    CHECK_THROWS_AS(ws_flex_sweep(8, 1.0, 7.0, 3, 3, 2, 5), std::invalid_argument);
}

TEST_CASE("augmentation appends connected same-size variants") {
    GraphPool pool = ws_flex_sweep(8, 2.0, 7.0, 2, 2, 1, 31);

    const GraphPool untouched = heterogeneity_augment(pool, 0, 5, 7);
    CHECK(untouched.size() == pool.size());

    const GraphPool augmented = heterogeneity_augment(pool, 2, 4, 7);
    CHECK(augmented.size() == 3 * pool.size());
    for (int i = 0; i < pool.size(); ++i) {
        CHECK(augmented.entries[i].graph == pool.entries[i].graph);  // originals untouched
    }
    for (int i = pool.size(); i < augmented.size(); ++i) {
        const PoolEntry& e = augmented.entries[i];
        REQUIRE(e.augmented.has_value());
        const Graph& base = pool.entries[e.augmented->base_id].graph;
        CHECK(e.graph.node_count() == base.node_count());
        CHECK(e.graph.edge_count() == base.edge_count());
        CHECK(is_connected(e.graph));
    }
}

TEST_CASE("augmenting a 2-regular cycle keeps n, m and nonnegative heterogeneity") {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < 8; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, 7);
    GraphPool pool;
    pool.entries.push_back({0, Graph(8, edges), GeneratorSpec::complete(8), std::nullopt});

    const GraphPool augmented = heterogeneity_augment(pool, 1, 3, 99);
    REQUIRE(augmented.size() == 2);
    const Graph& variant = augmented.entries[1].graph;
    CHECK(variant.node_count() == 8);
    CHECK(variant.edge_count() == 8);
    CHECK(degree_statistics(variant).heterogeneity >= 0.0);
}

TEST_CASE("pool round-trips through its directory format") {
    GraphPool pool = ws_flex_sweep(8, 2.0, 7.0, 2, 2, 2, 11);
    pool = heterogeneity_augment(pool, 1, 2, 3);

    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "relnas_pool_roundtrip";
    std::filesystem::remove_all(dir);
    write_pool(dir, pool);
    const GraphPool loaded = read_pool(dir);

    REQUIRE(loaded.size() == pool.size());
    for (int i = 0; i < pool.size(); ++i) {
        CHECK(loaded.entries[i].id == pool.entries[i].id);
        CHECK(loaded.entries[i].graph == pool.entries[i].graph);
        CHECK(loaded.entries[i].spec.kind == pool.entries[i].spec.kind);
        CHECK(loaded.entries[i].spec.seed == pool.entries[i].spec.seed);
        CHECK(loaded.entries[i].spec.degree == doctest::Approx(pool.entries[i].spec.degree));
        CHECK(loaded.entries[i].augmented.has_value() ==
              pool.entries[i].augmented.has_value());
    }
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
