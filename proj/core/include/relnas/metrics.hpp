#pragma once

#include <cstdint>
#include <vector>

#include "relnas/features.hpp"
#include "relnas/graph.hpp"

namespace relnas {

// Feature groups mirror how the quantities are computed: each group shares
// one traversal or solver. featurize() assembles them in canonical order.

struct DegreeStatistics {
    double average_degree;
    double heterogeneity;
    double resilience;
    double degree_entropy;
    double wedge_count;
    double gini_index;
};

struct DistanceMetrics {
    double average_path_length;
    double average_eccentricity;
    double diameter;
    double radius;
    double average_closeness;
    double average_closeness_wf;
};

struct ClusteringMetrics {
    double clustering_coefficient;
    double transitivity;
};

struct BetweennessMetrics {
    double average_node_betweenness;
    double average_edge_betweenness;
    double central_point_of_dominance;
};

struct ConnectivityMetrics {
    double average_node_connectivity;
    double edge_connectivity;
};

struct CommunityMetrics {
    double bimodularity;
    double greedy_modularity;
};

struct SpectralMetrics {
    double laplacian_min;  // second-smallest eigenvalue (algebraic connectivity)
    double laplacian_max;
};

struct EfficiencyMetrics {
    double local_efficiency;
    double global_efficiency;
};

DegreeStatistics degree_statistics(const Graph& g);
DistanceMetrics distance_metrics(const Graph& g, const DistanceMatrix& d);
ClusteringMetrics clustering_and_transitivity(const Graph& g);
BetweennessMetrics betweenness_metrics(const Graph& g);
ConnectivityMetrics connectivity_metrics(const Graph& g);
CommunityMetrics community_metrics(const Graph& g, std::uint64_t seed);
SpectralMetrics spectral_metrics(const Graph& g);
EfficiencyMetrics efficiency_metrics(const Graph& g, const DistanceMatrix& d);

/// Mean over nodes of per-node core numbers (peeling).
double core_number_metric(const Graph& g);

/// Newman modularity of a node partition, 2m normalization.
double modularity(const Graph& g, const std::vector<int>& communities);

/// Best balanced bisection found by Kernighan-Lin style swap passes that
/// maximize modularity directly; `restarts` seeded random initial splits.
std::vector<int> kl_bisection(const Graph& g, std::uint64_t seed, int restarts = 10);

/// Clauset-Newman-Moore greedy agglomeration; returns the partition with the
/// highest modularity along the merge sequence.
std::vector<int> cnm_communities(const Graph& g);

/// All 26 features in canonical order. Requires a connected graph; the seed
/// drives the Kernighan-Lin restarts so results are reproducible.
FeatureVector featurize(const Graph& g, std::uint64_t seed);

/// Computes only the groups covering `mask`; unrequested entries are NaN.
FeatureVector featurize_partial(const Graph& g, std::uint64_t seed, const FeatureMask& mask);

}  // namespace relnas
