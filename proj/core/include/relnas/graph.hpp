#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace relnas {

/// Simple undirected graph on nodes 0..n-1. Immutable after construction;
/// rewiring-style edits return modified copies.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int node_count() const { return n_; }
    int edge_count() const { return m_; }

    bool has_edge(int u, int v) const;
    int degree(int u) const { return static_cast<int>(adj_[u].size()); }

    /// Neighbors of u in ascending order.
    const std::vector<int>& neighbors(int u) const { return adj_[u]; }

    /// All edges as (u, v) with u < v, lexicographically sorted.
    std::vector<std::pair<int, int>> edges() const;

    Graph with_edge(int u, int v) const;
    Graph without_edge(int u, int v) const;

    bool operator==(const Graph& other) const;

private:
    void check_node(int u) const;
    void add_edge_unchecked(int u, int v);
    void remove_edge_unchecked(int u, int v);

    int n_ = 0;
    int m_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<bool> bits_;  // n*n adjacency bits for O(1) edge tests
};

/// Hop-count distances between all node pairs. Unreachable pairs carry an
/// explicit tag; callers must branch on reachable() rather than compare
/// against a sentinel magnitude.
class DistanceMatrix {
public:
    explicit DistanceMatrix(int n);

    int size() const { return n_; }
    bool reachable(int i, int j) const { return d_[idx(i, j)] >= 0; }

    /// Hop count; caller must have checked reachable(i, j).
    int hops(int i, int j) const { return d_[idx(i, j)]; }

    void set(int i, int j, int hops) { d_[idx(i, j)] = hops; }

private:
    int idx(int i, int j) const { return i * n_ + j; }

    int n_ = 0;
    std::vector<int> d_;
};

std::vector<int> degree_sequence(const Graph& g);

/// Per-source BFS hop counts; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Graph& g, int source);

DistanceMatrix all_pairs_shortest_paths(const Graph& g);

bool is_connected(const Graph& g);

/// Maximum number of internally node-disjoint s-t paths (node-splitting
/// max-flow). If (s, t) is an edge the direct path is counted.
int max_flow_vertex_connectivity(const Graph& g, int s, int t);

/// Value of a unit-capacity s-t max flow with each undirected edge modeled
/// as a pair of antiparallel arcs; equals the minimum s-t edge cut.
int edge_max_flow(const Graph& g, int s, int t);

}  // namespace relnas
