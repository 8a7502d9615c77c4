#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oracles/naive_metrics.hpp"
#include "relnas/metrics.hpp"
#include "relnas/rng.hpp"

using namespace relnas;
using doctest::Approx;

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

Graph star5() { return Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("degree statistics fixtures") {
    const DegreeStatistics k4 = degree_statistics(complete(4));
    CHECK(k4.average_degree == Approx(3.0));
    CHECK(k4.heterogeneity == Approx(0.0));
    CHECK(k4.resilience == Approx(3.0));
    CHECK(k4.wedge_count == Approx(12.0));
    CHECK(k4.gini_index == Approx(0.0));

    const DegreeStatistics s5 = degree_statistics(star5());
    CHECK(s5.average_degree == Approx(1.6));
    CHECK(s5.wedge_count == Approx(6.0));
    CHECK(s5.heterogeneity == Approx(0.9));
    CHECK(s5.resilience == Approx(2.5));

    CHECK_THROWS_AS(degree_statistics(Graph(3)), std::invalid_argument);
}

TEST_CASE("degree entropy follows the printed equation") {
    // K4: all degrees 3, m = 6: H = -(1/2) log(1/2) = log(2)/2.
    CHECK(degree_statistics(complete(4)).degree_entropy == Approx(std::log(2.0) / 2.0));
    // Star-5: degrees (4,1,1,1,1), m = 4.
    CHECK(degree_statistics(star5()).degree_entropy == Approx(std::log(4.0) / 5.0));
}

TEST_CASE("distance metrics fixtures") {
    const Graph c5 = cycle(5);
    const DistanceMetrics mc5 = distance_metrics(c5, all_pairs_shortest_paths(c5));
    CHECK(mc5.average_path_length == Approx(1.5));
    CHECK(mc5.average_eccentricity == Approx(2.0));
    CHECK(mc5.diameter == Approx(2.0));
    CHECK(mc5.radius == Approx(2.0));

    const Graph p3 = path(3);
    const DistanceMetrics mp3 = distance_metrics(p3, all_pairs_shortest_paths(p3));
    CHECK(mp3.average_path_length == Approx(4.0 / 3.0));
    CHECK(mp3.diameter == Approx(2.0));
    CHECK(mp3.radius == Approx(1.0));
    CHECK(mp3.average_closeness == Approx(7.0 / 9.0));
    CHECK(mp3.average_closeness_wf == Approx(7.0 / 9.0));

    const Graph k64 = complete(64);
    const DistanceMetrics mk = distance_metrics(k64, all_pairs_shortest_paths(k64));
    CHECK(mk.average_path_length == Approx(1.0));
    CHECK(mk.diameter == Approx(1.0));
    CHECK(mk.average_closeness == Approx(1.0));

    const Graph split(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(distance_metrics(split, all_pairs_shortest_paths(split)),
                    std::invalid_argument);
}

TEST_CASE("clustering and transitivity fixtures") {
    const ClusteringMetrics k4 = clustering_and_transitivity(complete(4));
    CHECK(k4.clustering_coefficient == Approx(1.0));
    CHECK(k4.transitivity == Approx(1.0));

    const ClusteringMetrics s5 = clustering_and_transitivity(star5());
    CHECK(s5.clustering_coefficient == Approx(0.0));
    CHECK(s5.transitivity == Approx(0.0));

    // Triangle plus a pendant edge: 1 triangle, 5 wedges.
    const Graph tri_pendant(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
    CHECK(clustering_and_transitivity(tri_pendant).transitivity == Approx(0.6));
}

TEST_CASE("betweenness fixtures") {
    const BetweennessMetrics p3 = betweenness_metrics(path(3));
    // Center has normalized betweenness 1; mean over three nodes is 1/3.
    CHECK(p3.average_node_betweenness == Approx(1.0 / 3.0));
    CHECK(p3.central_point_of_dominance == Approx(1.0));

    const BetweennessMetrics s5 = betweenness_metrics(star5());
    CHECK(s5.central_point_of_dominance == Approx(1.0));

    const BetweennessMetrics k4 = betweenness_metrics(complete(4));
    CHECK(k4.average_node_betweenness == Approx(0.0));
    CHECK(k4.central_point_of_dominance == Approx(0.0));

    CHECK_THROWS_AS(betweenness_metrics(path(2)), std::invalid_argument);
}

TEST_CASE("connectivity fixtures") {
    const ConnectivityMetrics c6 = connectivity_metrics(cycle(6));
    CHECK(c6.average_node_connectivity == Approx(2.0));
    CHECK(c6.edge_connectivity == Approx(2.0));

    const ConnectivityMetrics k4 = connectivity_metrics(complete(4));
    CHECK(k4.average_node_connectivity == Approx(3.0));
    CHECK(k4.edge_connectivity == Approx(3.0));

    const ConnectivityMetrics p3 = connectivity_metrics(path(3));
    CHECK(p3.average_node_connectivity == Approx(1.0));
    CHECK(p3.edge_connectivity == Approx(1.0));
}

TEST_CASE("modularity of K4 single community is zero") {
    CHECK(modularity(complete(4), {0, 0, 0, 0}) == Approx(0.0));
    const CommunityMetrics k4 = community_metrics(complete(4), 1);
    CHECK(k4.greedy_modularity == Approx(0.0));
    CHECK(oracle::max_modularity_all_partitions(complete(4)) == Approx(0.0));
}

TEST_CASE("CNM finds the two-triangle optimum") {
    // Two triangles joined by a bridge: optimum is the triangle split.
    const Graph g(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
    const double optimum = oracle::max_modularity_all_partitions(g);
    const double got = modularity(g, cnm_communities(g));
    CHECK(got == Approx(optimum).epsilon(1e-9));
    CHECK(got == Approx(5.0 / 14.0));
}

TEST_CASE("KL picks the adjacent-pair bisection of C4") {
    const Graph c4 = cycle(4);
    const std::vector<int> side = kl_bisection(c4, 3);
    const double q = modularity(c4, side);
    CHECK(q == Approx(0.0));  // adjacent split; opposite pairs give -0.5
    if (side[0] == side[1]) CHECK(side[2] == side[3]);
    CHECK(q == Approx(oracle::max_modularity_balanced_bisection(c4)));
}

TEST_CASE("spectral fixtures") {
    const SpectralMetrics k4 = spectral_metrics(complete(4));
    CHECK(k4.laplacian_min == Approx(4.0).epsilon(1e-10));
    CHECK(k4.laplacian_max == Approx(4.0).epsilon(1e-10));

    const SpectralMetrics p2 = spectral_metrics(path(2));
    CHECK(p2.laplacian_min == Approx(2.0).epsilon(1e-10));
    CHECK(p2.laplacian_max == Approx(2.0).epsilon(1e-10));

    const SpectralMetrics c4 = spectral_metrics(cycle(4));
    CHECK(c4.laplacian_min == Approx(2.0).epsilon(1e-10));
    CHECK(c4.laplacian_max == Approx(4.0).epsilon(1e-10));
}

TEST_CASE("efficiency fixtures") {
    const Graph k5 = complete(5);
    const EfficiencyMetrics mk5 = efficiency_metrics(k5, all_pairs_shortest_paths(k5));
    CHECK(mk5.local_efficiency == Approx(1.0));
    CHECK(mk5.global_efficiency == Approx(1.0));

    const Graph s5 = star5();
    const EfficiencyMetrics ms5 = efficiency_metrics(s5, all_pairs_shortest_paths(s5));
    CHECK(ms5.global_efficiency == Approx(0.7));
    CHECK(ms5.local_efficiency == Approx(0.0));

    const Graph p3 = path(3);
    const EfficiencyMetrics mp3 = efficiency_metrics(p3, all_pairs_shortest_paths(p3));
    CHECK(mp3.global_efficiency == Approx(2.5 / 3.0));
}

TEST_CASE("core numbers") {
    CHECK(core_number_metric(complete(4)) == Approx(3.0));
    CHECK(core_number_metric(path(5)) == Approx(1.0));
    CHECK(core_number_metric(star5()) == Approx(1.0));
    CHECK(core_number_metric(cycle(6)) == Approx(2.0));
}

TEST_CASE("featurize assembles the canonical order deterministically") {
    const Graph c5 = cycle(5);
    const FeatureVector a = featurize(c5, 99);
    const FeatureVector b = featurize(c5, 99);
    CHECK(a.values == b.values);

    CHECK(a[Feature::AveragePathLength] == Approx(1.5));
    CHECK(a[Feature::ClusteringCoefficient] == Approx(0.0));
    CHECK(a[Feature::AverageDegree] == Approx(2.0));

    const FeatureVector k4 = featurize(complete(4), 1);
    CHECK(k4[Feature::AverageDegree] == Approx(3.0));
    CHECK(k4[Feature::WedgeCount] == Approx(12.0));
    CHECK(k4[Feature::Transitivity] == Approx(1.0));
    CHECK(k4[Feature::LaplacianMin] == Approx(4.0));
    CHECK(k4[Feature::EdgeConnectivity] == Approx(3.0));

    CHECK_THROWS_AS(featurize(Graph(4, {{0, 1}, {2, 3}}), 1), std::invalid_argument);
}

TEST_CASE("featurize_partial computes only the requested groups") {
    const Graph c5 = cycle(5);
    const FeatureMask mask = mask_for({"average_degree", "diameter"});
    const FeatureVector fv = featurize_partial(c5, 7, mask);
    CHECK(fv[Feature::AverageDegree] == Approx(2.0));
    CHECK(fv[Feature::Diameter] == Approx(2.0));
    CHECK(std::isnan(fv[Feature::Bimodularity]));
    CHECK(std::isnan(fv[Feature::LaplacianMax]));
}

TEST_CASE("ordering and bound invariants on a fuzz sample") {
    const auto corpus = oracle::fuzz_corpus(60, 3, 10, 555);
    for (const Graph& g : corpus) {
        const FeatureVector fv = featurize(g, 17);
        CHECK(fv[Feature::Radius] <= fv[Feature::AverageEccentricity] + 1e-12);
        CHECK(fv[Feature::AverageEccentricity] <= fv[Feature::Diameter] + 1e-12);
        CHECK(fv[Feature::Heterogeneity] >= 0.0);
        CHECK(fv[Feature::ClusteringCoefficient] >= 0.0);
        CHECK(fv[Feature::ClusteringCoefficient] <= 1.0);
        CHECK(fv[Feature::Transitivity] <= 1.0);
        CHECK(fv[Feature::GiniIndex] >= -1e-12);
        CHECK(fv[Feature::GiniIndex] <= 1.0);
        CHECK(fv[Feature::GlobalEfficiency] <= 1.0);
        CHECK(fv[Feature::LocalEfficiency] <= 1.0);
        CHECK(fv[Feature::LaplacianMin] > 0.0);  // connected
        const auto deg = degree_sequence(g);
        const int max_deg = *std::max_element(deg.begin(), deg.end());
        CHECK(fv[Feature::LaplacianMax] <= 2.0 * max_deg + 1e-9);
        CHECK(fv[Feature::WedgeCount] == Approx(std::round(fv[Feature::WedgeCount])));
    }
}

TEST_CASE("regular graphs have zero heterogeneity and gini") {
    for (const Graph& g : {cycle(7), complete(6), cycle(10)}) {
        const DegreeStatistics s = degree_statistics(g);
        CHECK(s.heterogeneity == Approx(0.0));
        CHECK(s.gini_index == Approx(0.0).epsilon(1e-12));
        CHECK(s.resilience == Approx(s.average_degree));
    }
}

TEST_CASE("betweenness agrees with path enumeration on random graphs") {
    Rng rng = make_rng(71);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = uniform_int(rng, 4, 8);
        const Graph g = oracle::random_connected(n, 0.45, rng);
        const BetweennessMetrics got = betweenness_metrics(g);
        const oracle::BruteBetweenness want = oracle::betweenness_brute(g);

        double node_mean = 0.0;
        for (double b : want.node) node_mean += b;
        node_mean /= n;
        double edge_mean = 0.0;
        for (const auto& [e, b] : want.edge) edge_mean += b;
        edge_mean /= static_cast<double>(want.edge.size());

        CHECK(got.average_node_betweenness == Approx(node_mean).epsilon(1e-9));
        CHECK(got.average_edge_betweenness == Approx(edge_mean).epsilon(1e-9));
        CHECK(got.central_point_of_dominance ==
              Approx(want.central_point_of_dominance).epsilon(1e-9));
    }
}

}  // TEST_SUITE
