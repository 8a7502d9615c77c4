#include "relnas/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace relnas {

Graph::Graph(int n) : n_(n) {
    if (n < 1) {
        throw std::invalid_argument("Graph: node count must be positive, got " +
                                    std::to_string(n));
    }
    adj_.resize(n_);
    bits_.assign(static_cast<size_t>(n_) * n_, false);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (auto [u, v] : edges) {
        check_node(u);
        check_node(v);
        if (u == v) {
            throw std::invalid_argument("Graph: self-loop at node " + std::to_string(u));
        }
        if (has_edge(u, v)) {
            throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(u) +
                                        ", " + std::to_string(v) + ")");
        }
        add_edge_unchecked(u, v);
    }
}

void Graph::check_node(int u) const {
    if (u < 0 || u >= n_) {
        throw std::invalid_argument("Graph: node " + std::to_string(u) +
                                    " out of range [0, " + std::to_string(n_) + ")");
    }
}

bool Graph::has_edge(int u, int v) const {
    return bits_[static_cast<size_t>(u) * n_ + v];
}

void Graph::add_edge_unchecked(int u, int v) {
    bits_[static_cast<size_t>(u) * n_ + v] = true;
    bits_[static_cast<size_t>(v) * n_ + u] = true;
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    ++m_;
}

void Graph::remove_edge_unchecked(int u, int v) {
    bits_[static_cast<size_t>(u) * n_ + v] = false;
    bits_[static_cast<size_t>(v) * n_ + u] = false;
    adj_[u].erase(std::lower_bound(adj_[u].begin(), adj_[u].end(), v));
    adj_[v].erase(std::lower_bound(adj_[v].begin(), adj_[v].end(), u));
    --m_;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u) {
        for (int v : adj_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Graph Graph::with_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    if (u == v || has_edge(u, v)) {
        throw std::invalid_argument("with_edge: invalid or existing edge");
    }
    Graph g = *this;
    g.add_edge_unchecked(u, v);
    return g;
}

Graph Graph::without_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    if (!has_edge(u, v)) {
        throw std::invalid_argument("without_edge: edge not present");
    }
    Graph g = *this;
    g.remove_edge_unchecked(u, v);
    return g;
}

bool Graph::operator==(const Graph& other) const {
    return n_ == other.n_ && m_ == other.m_ && bits_ == other.bits_;
}

std::vector<int> degree_sequence(const Graph& g) {
    std::vector<int> deg(g.node_count());
    for (int u = 0; u < g.node_count(); ++u) deg[u] = g.degree(u);
    return deg;
}

std::vector<int> bfs_distances(const Graph& g, int source) {
    std::vector<int> dist(g.node_count(), -1);
    std::deque<int> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

DistanceMatrix::DistanceMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * n, -1) {}

DistanceMatrix all_pairs_shortest_paths(const Graph& g) {
    const int n = g.node_count();
    DistanceMatrix d(n);
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist = bfs_distances(g, s);
        for (int t = 0; t < n; ++t) d.set(s, t, dist[t]);
    }
    return d;
}

bool is_connected(const Graph& g) {
    std::vector<int> dist = bfs_distances(g, 0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

namespace {

// Dinic's algorithm on small unit-capacity networks.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(n, -1), level_(n), iter_(n) {}

    void add_arc(int u, int v, int cap) {
        arcs_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, head_[v], 0});
        head_[v] = static_cast<int>(arcs_.size()) - 1;
    }

    int run(int s, int t) {
        int flow = 0;
        while (build_levels(s, t)) {
            iter_ = head_;
            while (int pushed = augment(s, t, std::numeric_limits<int>::max())) {
                flow += pushed;
            }
        }
        return flow;
    }

private:
    struct Arc {
        int to;
        int next;
        int cap;
    };

    bool build_levels(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::deque<int> queue{s};
        level_[s] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
                if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
                    level_[arcs_[a].to] = level_[u] + 1;
                    queue.push_back(arcs_[a].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    int augment(int u, int t, int limit) {
        if (u == t) return limit;
        for (int& a = iter_[u]; a >= 0; a = arcs_[a].next) {
            Arc& arc = arcs_[a];
            if (arc.cap > 0 && level_[arc.to] == level_[u] + 1) {
                int pushed = augment(arc.to, t, std::min(limit, arc.cap));
                if (pushed > 0) {
                    arc.cap -= pushed;
                    arcs_[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
        }
        level_[u] = -1;
        return 0;
    }

    std::vector<Arc> arcs_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace

int max_flow_vertex_connectivity(const Graph& g, int s, int t) {
    if (s == t) {
        throw std::invalid_argument("max_flow_vertex_connectivity: s == t");
    }
    const int n = g.node_count();
    // Node splitting: v_in = v, v_out = v + n, unit arc in->out bounds the
    // internal use of each node; unit edge arcs keep the direct (s, t) edge
    // counted exactly once.
    MaxFlow flow(2 * n);
    for (int v = 0; v < n; ++v) flow.add_arc(v, v + n, 1);
    for (auto [u, v] : g.edges()) {
        flow.add_arc(u + n, v, 1);
        flow.add_arc(v + n, u, 1);
    }
    return flow.run(s + n, t);
}

int edge_max_flow(const Graph& g, int s, int t) {
    if (s == t) {
        throw std::invalid_argument("edge_max_flow: s == t");
    }
    MaxFlow flow(g.node_count());
    for (auto [u, v] : g.edges()) {
        flow.add_arc(u, v, 1);
        flow.add_arc(v, u, 1);
    }
    return flow.run(s, t);
}

}  // namespace relnas
