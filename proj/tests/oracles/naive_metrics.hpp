#pragma once

// Brute-force reference implementations, deliberately independent of the
// library's algorithms: Floyd-Warshall instead of BFS, separator/partition
// enumeration instead of max-flow and heuristics, path enumeration instead
// of Brandes, Jacobi rotations instead of Eigen. Test-only.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "relnas/graph.hpp"
#include "relnas/rng.hpp"

namespace relnas::oracle {

/// Hop distances for all pairs; -1 marks unreachable.
std::vector<std::vector<int>> floyd_warshall(const Graph& g);

/// Minimum s-t vertex separator size by subset enumeration; adjacent pairs
/// use Menger's reduction (1 + separator in G - (s,t)). Feasible for n <= 12.
int vertex_connectivity_brute(const Graph& g, int s, int t);

/// Global minimum edge cut by bipartition enumeration (n <= 20).
int edge_connectivity_brute(const Graph& g);

/// Minimum s-t edge cut by bipartition enumeration.
int st_edge_cut_brute(const Graph& g, int s, int t);

struct BruteBetweenness {
    std::vector<double> node;                       // normalized, endpoints excluded
    std::map<std::pair<int, int>, double> edge;     // normalized
    double central_point_of_dominance = 0.0;
};

/// Betweenness by enumerating every shortest path.
BruteBetweenness betweenness_brute(const Graph& g);

/// Maximum modularity over all partitions (restricted growth enumeration;
/// n <= 8 is practical).
double max_modularity_all_partitions(const Graph& g);

/// Maximum modularity over balanced bisections.
double max_modularity_balanced_bisection(const Graph& g);

/// Laplacian eigenvalues via cyclic Jacobi rotations, ascending.
std::vector<double> laplacian_eigenvalues_jacobi(const Graph& g);

double global_efficiency_brute(const Graph& g);
double local_efficiency_brute(const Graph& g);

struct BruteClustering {
    double clustering = 0.0;
    double transitivity = 0.0;
    double wedges = 0.0;
    double triangles = 0.0;
};
BruteClustering clustering_brute(const Graph& g);

/// Mean core number via per-k repeated deletion.
double core_number_mean_brute(const Graph& g);

/// Uniformly random connected ER-style graph (retry until connected).
Graph random_connected(int n, double p, Rng& rng);

/// Deterministic corpus of connected graphs with n in [n_lo, n_hi]: cycles,
/// paths, stars, completes, random trees and ER graphs of varying density.
std::vector<Graph> fuzz_corpus(int count, int n_lo, int n_hi, std::uint64_t seed);

}  // namespace relnas::oracle
