#include "relnas/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "relnas/rng.hpp"

namespace relnas {

namespace {

double binom2(double k) { return k * (k - 1) / 2.0; }

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

DegreeStatistics degree_statistics(const Graph& g) {
    const int n = g.node_count();
    const int m = g.edge_count();
    require(m >= 1, "degree_statistics: graph has no edges");

    std::vector<int> deg = degree_sequence(g);
    double mean = 0.0, mean_sq = 0.0;
    for (int k : deg) {
        mean += k;
        mean_sq += static_cast<double>(k) * k;
    }
    mean /= n;
    mean_sq /= n;

    double entropy = 0.0;
    double wedges = 0.0;
    for (int k : deg) {
        if (k > 0) {
            const double ratio = static_cast<double>(k) / m;
            entropy -= ratio * std::log(ratio);
        }
        wedges += binom2(k);
    }
    entropy /= n;

    std::vector<int> sorted = deg;
    std::sort(sorted.begin(), sorted.end());
    double weighted = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        weighted += static_cast<double>(i + 1) * sorted[i];
        total += sorted[i];
    }
    const double gini = 2.0 * weighted / (n * total) - static_cast<double>(n + 1) / n;

    return {mean, (mean_sq - mean * mean) / mean, mean_sq / mean, entropy, wedges, gini};
}

DistanceMetrics distance_metrics(const Graph& g, const DistanceMatrix& d) {
    const int n = g.node_count();
    require(n >= 2, "distance_metrics: need at least two nodes");

    double dist_sum = 0.0;
    double ecc_sum = 0.0, ecc_max = 0.0;
    double ecc_min = std::numeric_limits<double>::infinity();
    double closeness_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        long long row_sum = 0;
        int row_max = 0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            require(d.reachable(i, j), "distance_metrics: graph is disconnected");
            row_sum += d.hops(i, j);
            row_max = std::max(row_max, d.hops(i, j));
        }
        dist_sum += static_cast<double>(row_sum);
        ecc_sum += row_max;
        ecc_max = std::max(ecc_max, static_cast<double>(row_max));
        ecc_min = std::min(ecc_min, static_cast<double>(row_max));
        closeness_sum += static_cast<double>(n - 1) / static_cast<double>(row_sum);
    }
    const double apl = dist_sum / (static_cast<double>(n) * (n - 1));
    const double closeness = closeness_sum / n;
    // For connected graphs the Wasserman-Faust scale factor (n_r-1)/(n-1) is 1.
    return {apl, ecc_sum / n, ecc_max, ecc_min, closeness, closeness};
}

ClusteringMetrics clustering_and_transitivity(const Graph& g) {
    const int n = g.node_count();
    double coeff_sum = 0.0;
    double closed = 0.0;  // 3 * triangle count
    double wedges = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = g.neighbors(i);
        const int k = static_cast<int>(nbrs.size());
        if (k < 2) continue;
        int links = 0;
        for (size_t a = 0; a < nbrs.size(); ++a) {
            for (size_t b = a + 1; b < nbrs.size(); ++b) {
                if (g.has_edge(nbrs[a], nbrs[b])) ++links;
            }
        }
        coeff_sum += links / binom2(k);
        closed += links;
        wedges += binom2(k);
    }
    const double clustering = n > 0 ? coeff_sum / n : 0.0;
    const double transitivity = wedges > 0.0 ? closed / wedges : 0.0;
    return {clustering, transitivity};
}

BetweennessMetrics betweenness_metrics(const Graph& g) {
    const int n = g.node_count();
    require(n >= 3, "betweenness_metrics: need at least three nodes");
    const int m = g.edge_count();

    std::vector<double> node_raw(n, 0.0);
    std::vector<double> edge_raw(static_cast<size_t>(n) * n, 0.0);

    // Brandes accumulation with per-edge credit.
    std::vector<long long> sigma(n);
    std::vector<int> dist(n);
    std::vector<std::vector<int>> preds(n);
    std::vector<int> order;
    std::vector<double> delta(n);
    order.reserve(n);

    for (int s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0);
        std::fill(dist.begin(), dist.end(), -1);
        for (auto& p : preds) p.clear();
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }

        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int v : preds[w]) {
                const double credit =
                    static_cast<double>(sigma[v]) / sigma[w] * (1.0 + delta[w]);
                delta[v] += credit;
                edge_raw[static_cast<size_t>(v) * n + w] += credit;
            }
            if (w != s) node_raw[w] += delta[w];
        }
    }

    // Each unordered pair was counted from both endpoints; the conventional
    // normalizations are 2/((n-1)(n-2)) for nodes and 2/(n(n-1)) for edges.
    std::vector<double> node_b(n);
    for (int v = 0; v < n; ++v) {
        node_b[v] = node_raw[v] / (static_cast<double>(n - 1) * (n - 2));
    }
    double edge_sum = 0.0;
    for (auto [u, v] : g.edges()) {
        edge_sum += (edge_raw[static_cast<size_t>(u) * n + v] +
                     edge_raw[static_cast<size_t>(v) * n + u]) /
                    (static_cast<double>(n) * (n - 1));
    }

    const double max_b = *std::max_element(node_b.begin(), node_b.end());
    double dominance = 0.0, node_sum = 0.0;
    for (double b : node_b) {
        dominance += max_b - b;
        node_sum += b;
    }
    return {node_sum / n, m > 0 ? edge_sum / m : 0.0, dominance / (n - 1)};
}

ConnectivityMetrics connectivity_metrics(const Graph& g) {
    const int n = g.node_count();
    require(n >= 2, "connectivity_metrics: need at least two nodes");
    long long kappa_sum = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            kappa_sum += max_flow_vertex_connectivity(g, i, j);
        }
    }
    int edge_conn = std::numeric_limits<int>::max();
    for (int t = 1; t < n; ++t) {
        edge_conn = std::min(edge_conn, edge_max_flow(g, 0, t));
    }
    return {static_cast<double>(kappa_sum) / binom2(n), static_cast<double>(edge_conn)};
}

double modularity(const Graph& g, const std::vector<int>& communities) {
    const int n = g.node_count();
    const double m = g.edge_count();
    require(m >= 1, "modularity: graph has no edges");
    require(static_cast<int>(communities.size()) == n, "modularity: label count != n");

    const int c_max = *std::max_element(communities.begin(), communities.end()) + 1;
    std::vector<double> inside(c_max, 0.0), degree_sum(c_max, 0.0);
    for (auto [u, v] : g.edges()) {
        if (communities[u] == communities[v]) inside[communities[u]] += 1.0;
    }
    for (int u = 0; u < n; ++u) degree_sum[communities[u]] += g.degree(u);

    double q = 0.0;
    for (int c = 0; c < c_max; ++c) {
        const double half = degree_sum[c] / (2.0 * m);
        q += inside[c] / m - half * half;
    }
    return q;
}

namespace {

// State for one Kernighan-Lin run: link counts of every node into each side
// plus side degree sums, refreshed from scratch at pass boundaries.
struct KlState {
    std::vector<int> side;        // 0 = A, 1 = B
    std::vector<int> links[2];    // links[s][x] = neighbors of x on side s
    double deg_sum[2] = {0, 0};

    void refresh(const Graph& g) {
        const int n = g.node_count();
        links[0].assign(n, 0);
        links[1].assign(n, 0);
        deg_sum[0] = deg_sum[1] = 0;
        for (int u = 0; u < n; ++u) {
            deg_sum[side[u]] += g.degree(u);
            for (int v : g.neighbors(u)) links[side[v]][u]++;
        }
    }
};

double kl_swap_gain(const Graph& g, const KlState& st, int u, int v, double m) {
    // u currently on side A(=side[u]), v on the other side; gain of swapping.
    const int a = st.side[u];
    const int b = 1 - a;
    const double a_uv = g.has_edge(u, v) ? 1.0 : 0.0;
    const double delta_inside = (-st.links[a][u] + st.links[a][v] - a_uv) +
                                (-st.links[b][v] + st.links[b][u] - a_uv);
    const double ku = g.degree(u), kv = g.degree(v);
    const double da = st.deg_sum[a] - ku + kv;
    const double db = st.deg_sum[b] - kv + ku;
    const double penalty_new = da * da + db * db;
    const double penalty_old =
        st.deg_sum[a] * st.deg_sum[a] + st.deg_sum[b] * st.deg_sum[b];
    return delta_inside / m - (penalty_new - penalty_old) / (4.0 * m * m);
}

void kl_apply_swap(const Graph& g, KlState& st, int u, int v) {
    const int a = st.side[u];
    const int b = 1 - a;
    for (int x : g.neighbors(u)) {
        st.links[a][x]--;
        st.links[b][x]++;
    }
    for (int x : g.neighbors(v)) {
        st.links[b][x]--;
        st.links[a][x]++;
    }
    st.deg_sum[a] += g.degree(v) - g.degree(u);
    st.deg_sum[b] += g.degree(u) - g.degree(v);
    st.side[u] = b;
    st.side[v] = a;
}

// One KL pass: a greedy sequence of tentative best swaps (locking swapped
// nodes), then revert to the best prefix. Returns true if modularity rose.
bool kl_pass(const Graph& g, KlState& st, double m) {
    const int n = g.node_count();
    std::vector<int> start_side = st.side;
    std::vector<char> locked(n, 0);

    double cumulative = 0.0, best_cum = 0.0;
    int best_len = 0;
    std::vector<std::pair<int, int>> swaps;

    int count_a = static_cast<int>(std::count(st.side.begin(), st.side.end(), 0));
    const int max_swaps = std::min(count_a, n - count_a);
    for (int step = 0; step < max_swaps; ++step) {
        double best_gain = -std::numeric_limits<double>::infinity();
        int bu = -1, bv = -1;
        for (int u = 0; u < n; ++u) {
            if (locked[u] || st.side[u] != 0) continue;
            for (int v = 0; v < n; ++v) {
                if (locked[v] || st.side[v] != 1) continue;
                const double gain = kl_swap_gain(g, st, u, v, m);
                if (gain > best_gain) {
                    best_gain = gain;
                    bu = u;
                    bv = v;
                }
            }
        }
        if (bu < 0) break;
        kl_apply_swap(g, st, bu, bv);
        locked[bu] = locked[bv] = 1;
        swaps.emplace_back(bu, bv);
        cumulative += best_gain;
        if (cumulative > best_cum + 1e-12) {
            best_cum = cumulative;
            best_len = step + 1;
        }
    }

    st.side = std::move(start_side);
    for (int i = 0; i < best_len; ++i) {
        std::swap(st.side[swaps[i].first], st.side[swaps[i].second]);
    }
    st.refresh(g);
    return best_len > 0;
}

}  // namespace

std::vector<int> kl_bisection(const Graph& g, std::uint64_t seed, int restarts) {
    const int n = g.node_count();
    require(g.edge_count() >= 1, "kl_bisection: graph has no edges");
    if (n < 2) return std::vector<int>(n, 0);
    const double m = g.edge_count();

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = make_rng(seed);

    std::vector<int> best;
    double best_q = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        std::shuffle(perm.begin(), perm.end(), rng);
        KlState st;
        st.side.assign(n, 1);
        for (int i = 0; i < (n + 1) / 2; ++i) st.side[perm[i]] = 0;
        st.refresh(g);

        for (int pass = 0; pass < 2 * n; ++pass) {
            if (!kl_pass(g, st, m)) break;
        }
        const double q = modularity(g, st.side);
        if (q > best_q + 1e-15) {
            best_q = q;
            best = st.side;
        }
    }
    return best;
}

std::vector<int> cnm_communities(const Graph& g) {
    const int n = g.node_count();
    require(g.edge_count() >= 1, "cnm_communities: graph has no edges");
    const double m = g.edge_count();

    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::vector<char> active(n, 1);
    std::vector<double> deg_sum(n), inside(n, 0.0);
    std::vector<std::vector<double>> between(n, std::vector<double>(n, 0.0));
    for (int u = 0; u < n; ++u) deg_sum[u] = g.degree(u);
    for (auto [u, v] : g.edges()) {
        between[u][v] += 1.0;
        between[v][u] += 1.0;
    }

    double q = 0.0;
    for (int c = 0; c < n; ++c) {
        q -= (deg_sum[c] / (2.0 * m)) * (deg_sum[c] / (2.0 * m));
    }
    double best_q = q;
    std::vector<int> best_label = label;

    for (int merges = 0; merges + 1 < n; ++merges) {
        double best_gain = -std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double gain =
                    between[i][j] / m - deg_sum[i] * deg_sum[j] / (2.0 * m * m);
                if (gain > best_gain + 1e-15) {
                    best_gain = gain;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi < 0) break;
        // Merge bj into bi.
        inside[bi] += inside[bj] + between[bi][bj];
        deg_sum[bi] += deg_sum[bj];
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            between[bi][k] += between[bj][k];
            between[k][bi] = between[bi][k];
        }
        between[bi][bj] = between[bj][bi] = 0.0;
        active[bj] = 0;
        for (int u = 0; u < n; ++u) {
            if (label[u] == bj) label[u] = bi;
        }
        q += best_gain;
        if (q > best_q + 1e-12) {
            best_q = q;
            best_label = label;
        }
    }

    // Compact labels to 0..c-1.
    std::vector<int> remap(n, -1);
    int next = 0;
    for (int& l : best_label) {
        if (remap[l] < 0) remap[l] = next++;
        l = remap[l];
    }
    return best_label;
}

CommunityMetrics community_metrics(const Graph& g, std::uint64_t seed) {
    require(g.edge_count() >= 1, "community_metrics: graph has no edges");
    const double q_b = modularity(g, kl_bisection(g, seed));
    const double q_g = modularity(g, cnm_communities(g));
    return {q_b, q_g};
}

SpectralMetrics spectral_metrics(const Graph& g) {
    const int n = g.node_count();
    require(n >= 2, "spectral_metrics: need at least two nodes");
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) lap(u, u) = g.degree(u);
    for (auto [u, v] : g.edges()) {
        lap(u, v) = -1.0;
        lap(v, u) = -1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    const auto& values = solver.eigenvalues();
    return {values(1), values(n - 1)};
}

EfficiencyMetrics efficiency_metrics(const Graph& g, const DistanceMatrix& d) {
    const int n = g.node_count();
    require(n >= 2, "efficiency_metrics: need at least two nodes");

    double global = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (d.reachable(i, j)) global += 1.0 / d.hops(i, j);
        }
    }
    global /= binom2(n);

    // Local efficiency of i: global efficiency of the subgraph induced on
    // the neighbors of i (Latora-Marchiori).
    double local = 0.0;
    std::vector<int> index_of(n, -1);
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = g.neighbors(i);
        const int h = static_cast<int>(nbrs.size());
        if (h < 2) continue;
        for (int a = 0; a < h; ++a) index_of[nbrs[a]] = a;

        std::vector<std::vector<int>> sub(h);
        for (int a = 0; a < h; ++a) {
            for (int w : g.neighbors(nbrs[a])) {
                if (index_of[w] >= 0) sub[a].push_back(index_of[w]);
            }
        }
        double eff = 0.0;
        std::vector<int> dist(h);
        for (int src = 0; src < h; ++src) {
            std::fill(dist.begin(), dist.end(), -1);
            dist[src] = 0;
            std::deque<int> queue{src};
            while (!queue.empty()) {
                int x = queue.front();
                queue.pop_front();
                for (int y : sub[x]) {
                    if (dist[y] < 0) {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            for (int t = src + 1; t < h; ++t) {
                if (dist[t] > 0) eff += 1.0 / dist[t];
            }
        }
        local += eff / binom2(h);
        for (int a = 0; a < h; ++a) index_of[nbrs[a]] = -1;
    }
    return {local / n, global};
}

double core_number_metric(const Graph& g) {
    const int n = g.node_count();
    std::vector<int> deg = degree_sequence(g);
    std::vector<int> core(n, 0);
    std::vector<char> removed(n, 0);
    // Peel minimum-degree nodes; the running maximum peel level is the core
    // number of each removed node.
    int level = 0;
    for (int iter = 0; iter < n; ++iter) {
        int u = -1;
        for (int v = 0; v < n; ++v) {
            if (!removed[v] && (u < 0 || deg[v] < deg[u])) u = v;
        }
        level = std::max(level, deg[u]);
        core[u] = level;
        removed[u] = 1;
        for (int w : g.neighbors(u)) {
            if (!removed[w]) deg[w]--;
        }
    }
    return std::accumulate(core.begin(), core.end(), 0.0) / n;
}

FeatureVector featurize_partial(const Graph& g, std::uint64_t seed, const FeatureMask& mask) {
    require(is_connected(g), "featurize: graph must be connected");

    auto any_of = [&mask](std::initializer_list<Feature> fs) {
        for (Feature f : fs) {
            if (mask.test(static_cast<int>(f))) return true;
        }
        return false;
    };

    FeatureVector fv;
    fv.values.fill(std::numeric_limits<double>::quiet_NaN());

    const bool need_dist = any_of({Feature::AveragePathLength, Feature::AverageCloseness,
                                   Feature::AverageClosenessWf, Feature::AverageEccentricity,
                                   Feature::Diameter, Feature::Radius});
    const bool need_eff = any_of({Feature::LocalEfficiency, Feature::GlobalEfficiency});

    if (any_of({Feature::AverageDegree, Feature::Heterogeneity, Feature::Resilience,
                Feature::DegreeEntropy, Feature::WedgeCount, Feature::GiniIndex})) {
        DegreeStatistics s = degree_statistics(g);
        fv[Feature::AverageDegree] = s.average_degree;
        fv[Feature::Heterogeneity] = s.heterogeneity;
        fv[Feature::Resilience] = s.resilience;
        fv[Feature::DegreeEntropy] = s.degree_entropy;
        fv[Feature::WedgeCount] = s.wedge_count;
        fv[Feature::GiniIndex] = s.gini_index;
    }
    if (any_of({Feature::ClusteringCoefficient, Feature::Transitivity})) {
        ClusteringMetrics s = clustering_and_transitivity(g);
        fv[Feature::ClusteringCoefficient] = s.clustering_coefficient;
        fv[Feature::Transitivity] = s.transitivity;
    }
    if (need_dist || need_eff) {
        DistanceMatrix d = all_pairs_shortest_paths(g);
        if (need_dist) {
            DistanceMetrics s = distance_metrics(g, d);
            fv[Feature::AveragePathLength] = s.average_path_length;
            fv[Feature::AverageEccentricity] = s.average_eccentricity;
            fv[Feature::Diameter] = s.diameter;
            fv[Feature::Radius] = s.radius;
            fv[Feature::AverageCloseness] = s.average_closeness;
            fv[Feature::AverageClosenessWf] = s.average_closeness_wf;
        }
        if (need_eff) {
            EfficiencyMetrics s = efficiency_metrics(g, d);
            fv[Feature::LocalEfficiency] = s.local_efficiency;
            fv[Feature::GlobalEfficiency] = s.global_efficiency;
        }
    }
    if (any_of({Feature::AverageEdgeBetweenness, Feature::AverageNodeBetweenness,
                Feature::CentralPointOfDominance})) {
        BetweennessMetrics s = betweenness_metrics(g);
        fv[Feature::AverageNodeBetweenness] = s.average_node_betweenness;
        fv[Feature::AverageEdgeBetweenness] = s.average_edge_betweenness;
        fv[Feature::CentralPointOfDominance] = s.central_point_of_dominance;
    }
    if (any_of({Feature::AverageNodeConnectivity, Feature::EdgeConnectivity})) {
        ConnectivityMetrics s = connectivity_metrics(g);
        fv[Feature::AverageNodeConnectivity] = s.average_node_connectivity;
        fv[Feature::EdgeConnectivity] = s.edge_connectivity;
    }
    if (any_of({Feature::Bimodularity, Feature::GreedyModularity})) {
        CommunityMetrics s = community_metrics(g, seed);
        fv[Feature::Bimodularity] = s.bimodularity;
        fv[Feature::GreedyModularity] = s.greedy_modularity;
    }
    if (any_of({Feature::LaplacianMin, Feature::LaplacianMax})) {
        SpectralMetrics s = spectral_metrics(g);
        fv[Feature::LaplacianMin] = s.laplacian_min;
        fv[Feature::LaplacianMax] = s.laplacian_max;
    }
    if (mask.test(static_cast<int>(Feature::CoreNumber))) {
        fv[Feature::CoreNumber] = core_number_metric(g);
    }
    return fv;
}

FeatureVector featurize(const Graph& g, std::uint64_t seed) {
    return featurize_partial(g, seed, all_features_mask());
}

}  // namespace relnas
