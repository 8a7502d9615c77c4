#include "relnas/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relnas/edgelist.hpp"
#include "relnas/rng.hpp"

namespace relnas {

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::WS: return "WS";
        case GeneratorKind::WS_FLEX: return "WS_FLEX";
        case GeneratorKind::ER: return "ER";
        case GeneratorKind::BA: return "BA";
        case GeneratorKind::HARARY: return "HARARY";
        case GeneratorKind::COMPLETE: return "COMPLETE";
    }
    throw std::logic_error("unknown GeneratorKind");
}

GeneratorKind generator_kind_from_string(const std::string& s) {
    if (s == "WS") return GeneratorKind::WS;
    if (s == "WS_FLEX") return GeneratorKind::WS_FLEX;
    if (s == "ER") return GeneratorKind::ER;
    if (s == "BA") return GeneratorKind::BA;
    if (s == "HARARY") return GeneratorKind::HARARY;
    if (s == "COMPLETE") return GeneratorKind::COMPLETE;
    throw std::invalid_argument("unknown generator kind: " + s);
}

GeneratorSpec GeneratorSpec::ws(int n, double degree, double rewire_p, std::uint64_t seed) {
    return {GeneratorKind::WS, n, degree, rewire_p, 0.0, 0, 0, seed};
}
GeneratorSpec GeneratorSpec::ws_flex(int n, double degree, double rewire_p, std::uint64_t seed) {
    return {GeneratorKind::WS_FLEX, n, degree, rewire_p, 0.0, 0, 0, seed};
}
GeneratorSpec GeneratorSpec::er(int n, double edge_p, std::uint64_t seed) {
    return {GeneratorKind::ER, n, 0.0, 0.0, edge_p, 0, 0, seed};
}
GeneratorSpec GeneratorSpec::ba(int n, int attach, std::uint64_t seed) {
    return {GeneratorKind::BA, n, 0.0, 0.0, 0.0, attach, 0, seed};
}
GeneratorSpec GeneratorSpec::harary(int n, int connectivity) {
    return {GeneratorKind::HARARY, n, 0.0, 0.0, 0.0, 0, connectivity, 0};
}
GeneratorSpec GeneratorSpec::complete(int n) {
    return {GeneratorKind::COMPLETE, n, 0.0, 0.0, 0.0, 0, 0, 0};
}

namespace {

void validate(const GeneratorSpec& spec) {
    if (spec.n < 2) {
        throw std::invalid_argument("generator: n must be >= 2");
    }
    switch (spec.kind) {
        case GeneratorKind::WS:
        case GeneratorKind::WS_FLEX:
            if (spec.degree < 2.0 || spec.degree > spec.n - 1) {
                throw std::invalid_argument("generator: average degree must lie in [2, n-1]");
            }
            if (spec.rewire_p < 0.0 || spec.rewire_p > 1.0) {
                throw std::invalid_argument("generator: rewiring probability must lie in [0, 1]");
            }
            break;
        case GeneratorKind::ER:
            if (spec.edge_p < 0.0 || spec.edge_p > 1.0) {
                throw std::invalid_argument("generator: edge probability must lie in [0, 1]");
            }
            break;
        case GeneratorKind::BA:
            if (spec.attach < 1 || spec.attach >= spec.n) {
                throw std::invalid_argument("generator: BA attachment count must lie in [1, n-1]");
            }
            break;
        case GeneratorKind::HARARY:
            if (spec.connectivity < 1 || spec.connectivity >= spec.n) {
                throw std::invalid_argument("generator: Harary connectivity must lie in [1, n-1]");
            }
            break;
        case GeneratorKind::COMPLETE:
            break;
    }
}

// Working adjacency during construction; converted to Graph at the end.
struct EdgeSet {
    explicit EdgeSet(int n) : n(n), bits(static_cast<size_t>(n) * n, false) {}

    bool has(int u, int v) const { return bits[static_cast<size_t>(u) * n + v]; }
    void add(int u, int v) {
        bits[static_cast<size_t>(u) * n + v] = true;
        bits[static_cast<size_t>(v) * n + u] = true;
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    void remove(int u, int v) {
        bits[static_cast<size_t>(u) * n + v] = false;
        bits[static_cast<size_t>(v) * n + u] = false;
        auto key = std::make_pair(std::min(u, v), std::max(u, v));
        edges.erase(std::find(edges.begin(), edges.end(), key));
    }

    Graph to_graph() const { return Graph(n, edges); }

    int n;
    std::vector<bool> bits;
    std::vector<std::pair<int, int>> edges;
};

// Replace (keep, drop) by (keep, w) for w drawn uniformly from the
// non-neighbors of keep. Returns false when keep is saturated.
bool rewire_endpoint(EdgeSet& es, Rng& rng, int keep, int drop) {
    std::vector<int> candidates;
    for (int w = 0; w < es.n; ++w) {
        if (w != keep && !es.has(keep, w)) candidates.push_back(w);
    }
    if (candidates.empty()) return false;
    int w = candidates[uniform_int(rng, 0, static_cast<int>(candidates.size()) - 1)];
    es.remove(keep, drop);
    es.add(keep, w);
    return true;
}

// BFS over the adjacency bits; avoids materializing a Graph per trial move.
bool edge_set_connected(const EdgeSet& es) {
    const int n = es.n;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        const auto row = es.bits.begin() + static_cast<size_t>(u) * n;
        for (int v = 0; v < n; ++v) {
            if (row[v] && !seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == n;
}

Graph make_complete(int n) {
    EdgeSet es(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) es.add(u, v);
    }
    return es.to_graph();
}

Graph make_er(int n, double p, Rng& rng) {
    EdgeSet es(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (uniform_real(rng) < p) es.add(u, v);
        }
    }
    return es.to_graph();
}

Graph make_ws(int n, double degree, double p, Rng& rng) {
    int k = 2 * static_cast<int>(std::lround(degree / 2.0));
    k = std::clamp(k, 2, 2 * ((n - 1) / 2));
    EdgeSet es(n);
    for (int off = 1; off <= k / 2; ++off) {
        for (int u = 0; u < n; ++u) es.add(u, (u + off) % n);
    }
    // Classic rewiring: visit each lattice edge once, keep the left endpoint.
    for (int off = 1; off <= k / 2; ++off) {
        for (int u = 0; u < n; ++u) {
            int v = (u + off) % n;
            if (uniform_real(rng) < p && es.has(u, v)) {
                rewire_endpoint(es, rng, u, v);
            }
        }
    }
    return es.to_graph();
}

// WS-flex: ring lattice with floor(degree*n/2) total edges. Full circulant
// offsets first, then the remainder is placed on nearest free slots while
// keeping the extra-degree spread at most one whenever the lattice allows.
Graph make_ws_flex(int n, double degree, double p, Rng& rng) {
    const long long m_target = static_cast<long long>(std::floor(degree * n / 2.0));
    const int base_off = static_cast<int>(degree / 2.0);
    EdgeSet es(n);
    for (int off = 1; off <= base_off; ++off) {
        for (int u = 0; u < n; ++u) {
            if (!es.has(u, (u + off) % n)) es.add(u, (u + off) % n);
        }
    }
    long long remaining = m_target - static_cast<long long>(es.edges.size());

    // Small remainders (every integer-degree case lands here) are placed as
    // half-perimeter chords from a random rotation: a matching, so no node
    // gains more than one extra edge and the degree spread stays <= 1.
    if (remaining > 0 && remaining <= n / 2) {
        const int h = n / 2;
        const int s = uniform_int(rng, 0, n - 1);
        for (int i = 0; i < remaining; ++i) {
            es.add((s + i) % n, (s + i + h) % n);
        }
        remaining = 0;
    }

    std::vector<int> extra(n, 0);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    int cap = 1;
    while (remaining > 0 && cap <= n) {
        std::shuffle(order.begin(), order.end(), rng);
        bool progress = false;
        for (int u : order) {
            if (remaining == 0) break;
            if (extra[u] >= cap) continue;
            bool placed = false;
            for (int dist = base_off + 1; dist <= n / 2 && !placed; ++dist) {
                for (int v : {(u + dist) % n, (u - dist + n) % n}) {
                    if (v == u || es.has(u, v) || extra[v] >= cap) continue;
                    es.add(u, v);
                    ++extra[u];
                    ++extra[v];
                    --remaining;
                    placed = true;
                    break;
                }
            }
            progress = progress || placed;
        }
        if (!progress) ++cap;
    }

    // Rewire each lattice edge with probability p; the kept endpoint is
    // chosen at random since flex edges have no canonical orientation.
    std::vector<std::pair<int, int>> lattice = es.edges;
    std::sort(lattice.begin(), lattice.end());
    for (auto [a, b] : lattice) {
        if (uniform_real(rng) >= p) continue;
        if (!es.has(a, b)) continue;
        int keep = uniform_int(rng, 0, 1) == 0 ? a : b;
        int drop = keep == a ? b : a;
        rewire_endpoint(es, rng, keep, drop);
    }
    return es.to_graph();
}

Graph make_ba(int n, int attach, Rng& rng) {
    EdgeSet es(n);
    std::vector<int> repeated;
    for (int u = attach; u < n; ++u) {
        std::vector<int> targets;
        if (u == attach) {
            for (int t = 0; t < attach; ++t) targets.push_back(t);
        } else {
            while (static_cast<int>(targets.size()) < attach) {
                int t = repeated[uniform_int(rng, 0, static_cast<int>(repeated.size()) - 1)];
                if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                    targets.push_back(t);
                }
            }
        }
        for (int t : targets) {
            es.add(u, t);
            repeated.push_back(u);
            repeated.push_back(t);
        }
    }
    return es.to_graph();
}

Graph make_harary(int n, int k) {
    EdgeSet es(n);
    if (k == 1) {
        for (int u = 0; u + 1 < n; ++u) es.add(u, u + 1);
        return es.to_graph();
    }
    const int r = k / 2;
    for (int off = 1; off <= r; ++off) {
        for (int u = 0; u < n; ++u) {
            if (!es.has(u, (u + off) % n)) es.add(u, (u + off) % n);
        }
    }
    if (k % 2 == 1) {
        if (n % 2 == 0) {
            for (int u = 0; u < n / 2; ++u) es.add(u, u + n / 2);
        } else {
            // Odd n: join i to i + (n-1)/2 for i = 0..(n-1)/2; one node ends
            // up with degree k+1, per Harary's construction.
            const int h = (n - 1) / 2;
            for (int u = 0; u <= h; ++u) {
                if (!es.has(u, u + h)) es.add(u, u + h);
            }
        }
    }
    return es.to_graph();
}

}  // namespace

Graph generate(const GeneratorSpec& spec) {
    validate(spec);
    switch (spec.kind) {
        case GeneratorKind::COMPLETE:
            return make_complete(spec.n);
        case GeneratorKind::HARARY:
            return make_harary(spec.n, spec.connectivity);
        case GeneratorKind::BA: {
            Rng rng = make_rng(spec.seed);
            return make_ba(spec.n, spec.attach, rng);
        }
        default:
            break;
    }
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng = make_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
        Graph g = spec.kind == GeneratorKind::ER
                      ? make_er(spec.n, spec.edge_p, rng)
                      : (spec.kind == GeneratorKind::WS
                             ? make_ws(spec.n, spec.degree, spec.rewire_p, rng)
                             : make_ws_flex(spec.n, spec.degree, spec.rewire_p, rng));
        if (is_connected(g)) return g;
    }
    throw std::runtime_error("generate: no connected graph after 100 attempts (" +
                             to_string(spec.kind) + ", n=" + std::to_string(spec.n) + ")");
}

GraphPool ws_flex_sweep(int n, double degree_lo, double degree_hi, int degree_steps,
                        int p_steps, int seeds_per_cell, std::uint64_t base_seed) {
    if (!(2.0 <= degree_lo && degree_lo < degree_hi && degree_hi <= n - 1)) {
        throw std::invalid_argument("ws_flex_sweep: need 2 <= degree_lo < degree_hi <= n-1");
    }
    if (degree_steps < 1 || p_steps < 1 || seeds_per_cell < 1) {
        throw std::invalid_argument("ws_flex_sweep: grid dimensions must be positive");
    }
    GraphPool pool;
    std::uint64_t cell = 0;
    for (int di = 0; di < degree_steps; ++di) {
        const double t = degree_steps == 1 ? 0.0 : static_cast<double>(di) / (degree_steps - 1);
        const double degree = degree_lo * std::pow(degree_hi / degree_lo, t);
        for (int pi = 0; pi < p_steps; ++pi) {
            const double p = p_steps == 1 ? 0.0 : static_cast<double>(pi) / (p_steps - 1);
            for (int si = 0; si < seeds_per_cell; ++si, ++cell) {
                GeneratorSpec spec =
                    GeneratorSpec::ws_flex(n, degree, p, derive_seed(base_seed, cell));
                try {
                    Graph g = generate(spec);
                    pool.entries.push_back({pool.size(), std::move(g), spec, std::nullopt});
                } catch (const std::runtime_error&) {
                    // Connectivity failure: drop the cell.
                }
            }
        }
    }
    return pool;
}

GraphPool heterogeneity_augment(const GraphPool& pool, int rounds, int rewires_per_round,
                                std::uint64_t seed) {
    if (pool.entries.empty()) {
        throw std::invalid_argument("heterogeneity_augment: pool is empty");
    }
    GraphPool out = pool;
    for (int round = 0; round < rounds; ++round) {
        for (const PoolEntry& base : pool.entries) {
            const std::uint64_t variant_seed =
                derive_seed(derive_seed(seed, static_cast<std::uint64_t>(round)),
                            static_cast<std::uint64_t>(base.id));
            Rng rng = make_rng(variant_seed);
            EdgeSet es(base.graph.node_count());
            for (auto [u, v] : base.graph.edges()) es.add(u, v);
            int done = 0;
            for (int attempt = 0; done < rewires_per_round && attempt < 100 * rewires_per_round;
                 ++attempt) {
                auto [a, b] = es.edges[uniform_int(rng, 0, static_cast<int>(es.edges.size()) - 1)];
                int keep = uniform_int(rng, 0, 1) == 0 ? a : b;
                int drop = keep == a ? b : a;
                if (!rewire_endpoint(es, rng, keep, drop)) continue;
                if (!edge_set_connected(es)) {
                    // Undo: the new edge is the last one appended.
                    auto added = es.edges.back();
                    es.remove(added.first, added.second);
                    es.add(keep, drop);
                    continue;
                }
                ++done;
            }
            AugmentInfo info{base.id, round, done, variant_seed};
            out.entries.push_back({out.size(), es.to_graph(), base.spec, info});
        }
    }
    return out;
}

namespace {

std::string spec_params(const GeneratorSpec& spec) {
    std::ostringstream os;
    os << "n=" << spec.n;
    switch (spec.kind) {
        case GeneratorKind::WS:
        case GeneratorKind::WS_FLEX:
            os << " k=" << format_double(spec.degree) << " p=" << format_double(spec.rewire_p);
            break;
        case GeneratorKind::ER:
            os << " p=" << format_double(spec.edge_p);
            break;
        case GeneratorKind::BA:
            os << " m=" << spec.attach;
            break;
        case GeneratorKind::HARARY:
            os << " k=" << spec.connectivity;
            break;
        case GeneratorKind::COMPLETE:
            break;
    }
    os << " seed=" << spec.seed;
    return os.str();
}

std::map<std::string, std::string> parse_params(std::istringstream& in) {
    std::map<std::string, std::string> kv;
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("pool.manifest: malformed token: " + token);
        }
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return kv;
}

}  // namespace

void write_pool(const std::filesystem::path& dir, const GraphPool& pool) {
    std::filesystem::create_directories(dir);
    std::ostringstream manifest;
    for (const PoolEntry& e : pool.entries) {
        manifest << e.id << ' ' << to_string(e.spec.kind) << ' ' << spec_params(e.spec);
        if (e.augmented) {
            manifest << " from=" << e.augmented->base_id << " round=" << e.augmented->round
                     << " rewires=" << e.augmented->rewires
                     << " rewire_seed=" << e.augmented->seed;
        }
        manifest << '\n';
        write_edge_list(dir / (std::to_string(e.id) + ".edges"), e.graph);
    }
    write_file_atomic(dir / "pool.manifest", manifest.str());
}

GraphPool read_pool(const std::filesystem::path& dir) {
    std::ifstream in(dir / "pool.manifest");
    if (!in) {
        throw std::runtime_error("cannot open " + (dir / "pool.manifest").string());
    }
    GraphPool pool;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        int id = 0;
        std::string kind;
        is >> id >> kind;
        auto kv = parse_params(is);
        GeneratorSpec spec;
        spec.kind = generator_kind_from_string(kind);
        spec.n = std::stoi(kv.at("n"));
        if (kv.count("seed")) spec.seed = std::stoull(kv.at("seed"));
        switch (spec.kind) {
            case GeneratorKind::WS:
            case GeneratorKind::WS_FLEX:
                spec.degree = std::stod(kv.at("k"));
                spec.rewire_p = std::stod(kv.at("p"));
                break;
            case GeneratorKind::ER:
                spec.edge_p = std::stod(kv.at("p"));
                break;
            case GeneratorKind::BA:
                spec.attach = std::stoi(kv.at("m"));
                break;
            case GeneratorKind::HARARY:
                spec.connectivity = std::stoi(kv.at("k"));
                break;
            case GeneratorKind::COMPLETE:
                break;
        }
        std::optional<AugmentInfo> augmented;
        if (kv.count("from")) {
            augmented = AugmentInfo{std::stoi(kv.at("from")), std::stoi(kv.at("round")),
                                    std::stoi(kv.at("rewires")), std::stoull(kv.at("rewire_seed"))};
        }
        Graph g = read_edge_list(dir / (std::to_string(id) + ".edges"));
        pool.entries.push_back({id, std::move(g), spec, augmented});
    }
    return pool;
}

}  // namespace relnas
