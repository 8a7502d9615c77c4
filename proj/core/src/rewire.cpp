#include "relnas/rewire.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "relnas/edgelist.hpp"
#include "relnas/metrics.hpp"
#include "relnas/parallel.hpp"

namespace relnas {

std::string to_string(RewireOpKind kind) {
    switch (kind) {
        case RewireOpKind::AddEdge: return "ADD_EDGE";
        case RewireOpKind::RemoveEdge: return "REMOVE_EDGE";
        case RewireOpKind::DoubleSwap: return "DOUBLE_SWAP";
        case RewireOpKind::RandomRewire: return "RANDOM_REWIRE";
    }
    throw std::logic_error("unknown RewireOpKind");
}

RewireOpKind rewire_op_kind_from_string(const std::string& s) {
    if (s == "ADD_EDGE") return RewireOpKind::AddEdge;
    if (s == "REMOVE_EDGE") return RewireOpKind::RemoveEdge;
    if (s == "DOUBLE_SWAP") return RewireOpKind::DoubleSwap;
    if (s == "RANDOM_REWIRE") return RewireOpKind::RandomRewire;
    throw std::invalid_argument("unknown rewire op kind: " + s);
}

Graph apply_rewire(const Graph& g, const RewireOp& op) {
    const auto& o = op.operands;
    switch (op.kind) {
        case RewireOpKind::AddEdge:
            return g.with_edge(o[0], o[1]);
        case RewireOpKind::RemoveEdge:
            return g.without_edge(o[0], o[1]);
        case RewireOpKind::DoubleSwap:
            return g.without_edge(o[0], o[1])
                .without_edge(o[2], o[3])
                .with_edge(o[0], o[2])
                .with_edge(o[1], o[3]);
        case RewireOpKind::RandomRewire:
            return g.without_edge(o[0], o[1]).with_edge(o[0], o[2]);
    }
    throw std::logic_error("unknown RewireOpKind");
}

namespace {

// Bridge edges via Tarjan lowpoints; removing any other edge keeps the
// graph connected.
std::vector<std::pair<int, int>> non_bridge_edges(const Graph& g) {
    const int n = g.node_count();
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<std::pair<int, int>> bridges;
    int timer = 0;

    // Iterative DFS; (node, parent, neighbor cursor).
    for (int root = 0; root < n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<std::array<int, 3>> stack{{root, -1, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            auto& [u, parent, cursor] = stack.back();
            if (cursor < static_cast<int>(g.neighbors(u).size())) {
                const int v = g.neighbors(u)[cursor++];
                if (v == parent) {
                    parent = -2;  // skip the tree edge to the parent exactly once
                    continue;
                }
                if (disc[v] >= 0) {
                    low[u] = std::min(low[u], disc[v]);
                } else {
                    disc[v] = low[v] = timer++;
                    stack.push_back({v, u, 0});
                }
            } else {
                const int u_done = u;
                stack.pop_back();
                if (!stack.empty()) {
                    const int p = stack.back()[0];
                    low[p] = std::min(low[p], low[u_done]);
                    if (low[u_done] > disc[p]) {
                        bridges.emplace_back(std::min(p, u_done), std::max(p, u_done));
                    }
                }
            }
        }
    }

    std::sort(bridges.begin(), bridges.end());
    std::vector<std::pair<int, int>> out;
    for (auto e : g.edges()) {
        if (!std::binary_search(bridges.begin(), bridges.end(), e)) out.push_back(e);
    }
    return out;
}

std::optional<Proposal> propose_add_edge(const Graph& g, Rng& rng) {
    const int n = g.node_count();
    std::vector<std::pair<int, int>> non_edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (!g.has_edge(u, v)) non_edges.emplace_back(u, v);
        }
    }
    if (non_edges.empty()) return std::nullopt;
    auto [u, v] = non_edges[uniform_int(rng, 0, static_cast<int>(non_edges.size()) - 1)];
    RewireOp op{RewireOpKind::AddEdge, {u, v, -1, -1}};
    return Proposal{apply_rewire(g, op), op};
}

std::optional<Proposal> propose_remove_edge(const Graph& g, Rng& rng) {
    auto safe = non_bridge_edges(g);
    if (safe.empty()) return std::nullopt;
    auto [u, v] = safe[uniform_int(rng, 0, static_cast<int>(safe.size()) - 1)];
    RewireOp op{RewireOpKind::RemoveEdge, {u, v, -1, -1}};
    return Proposal{apply_rewire(g, op), op};
}

std::optional<Proposal> propose_double_swap(const Graph& g, Rng& rng, int retry_budget) {
    const auto edges = g.edges();
    const int m = static_cast<int>(edges.size());
    if (m < 2) return std::nullopt;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        const int e1 = uniform_int(rng, 0, m - 1);
        const int e2 = uniform_int(rng, 0, m - 1);
        if (e1 == e2) continue;
        auto [u, v] = edges[e1];
        auto [x, y] = edges[e2];
        if (uniform_int(rng, 0, 1) == 1) std::swap(x, y);
        if (u == x || u == y || v == x || v == y) continue;
        if (g.has_edge(u, x) || g.has_edge(v, y)) continue;
        RewireOp op{RewireOpKind::DoubleSwap, {u, v, x, y}};
        Graph rewired = apply_rewire(g, op);
        if (is_connected(rewired)) return Proposal{std::move(rewired), op};
    }
    return std::nullopt;
}

std::optional<Proposal> propose_random_rewire(const Graph& g, Rng& rng, int retry_budget) {
    const auto edges = g.edges();
    const int n = g.node_count();
    const int m = static_cast<int>(edges.size());
    if (m < 1) return std::nullopt;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        auto [a, b] = edges[uniform_int(rng, 0, m - 1)];
        const int keep = uniform_int(rng, 0, 1) == 0 ? a : b;
        const int drop = keep == a ? b : a;
        std::vector<int> candidates;
        for (int w = 0; w < n; ++w) {
            if (w != keep && !g.has_edge(keep, w)) candidates.push_back(w);
        }
        if (candidates.empty()) continue;
        const int w = candidates[uniform_int(rng, 0, static_cast<int>(candidates.size()) - 1)];
        RewireOp op{RewireOpKind::RandomRewire, {keep, drop, w, -1}};
        Graph rewired = apply_rewire(g, op);
        if (is_connected(rewired)) return Proposal{std::move(rewired), op};
    }
    return std::nullopt;
}

// Cheap necessary conditions; propose() still validates the sampled operands.
bool kind_applicable(const Graph& g, RewireOpKind kind) {
    const long long n = g.node_count();
    const long long complete = n * (n - 1) / 2;
    switch (kind) {
        case RewireOpKind::AddEdge:
            return g.edge_count() < complete;
        case RewireOpKind::RemoveEdge:
            return g.edge_count() >= 1;
        case RewireOpKind::DoubleSwap:
            return g.edge_count() >= 2 && n >= 4;
        case RewireOpKind::RandomRewire:
            return g.edge_count() >= 1 && g.edge_count() < complete;
    }
    return false;
}

}  // namespace

std::optional<Proposal> propose(const Graph& g, RewireOpKind kind, Rng& rng, int retry_budget) {
    switch (kind) {
        case RewireOpKind::AddEdge: return propose_add_edge(g, rng);
        case RewireOpKind::RemoveEdge: return propose_remove_edge(g, rng);
        case RewireOpKind::DoubleSwap: return propose_double_swap(g, rng, retry_budget);
        case RewireOpKind::RandomRewire: return propose_random_rewire(g, rng, retry_budget);
    }
    throw std::logic_error("unknown RewireOpKind");
}

std::vector<Graph> rewire_chain(const Graph& g, RewireOpKind kind, int steps, Rng& rng) {
    std::vector<Graph> out;
    Graph current = g;
    for (int i = 0; i < steps; ++i) {
        auto next = propose(current, kind, rng);
        if (!next) break;
        current = std::move(next->graph);
        out.push_back(current);
    }
    return out;
}

Graph SearchTrace::replay(int upto_steps) const {
    Graph g = initial;
    for (int i = 0; i < upto_steps; ++i) {
        g = apply_rewire(g, steps[i].op);
    }
    return g;
}

namespace {

void validate_config(const SearchConfig& config) {
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
        throw std::invalid_argument("search: epsilon must lie in (0, 1)");
    }
    if (config.max_steps < 1) {
        throw std::invalid_argument("search: max_steps must be >= 1");
    }
    if (config.allowed_ops.empty()) {
        throw std::invalid_argument("search: no rewiring operators enabled");
    }
}

}  // namespace

SearchTrace search(const Graph& g0, const RegressionModel& model, const SearchConfig& config) {
    validate_config(config);
    if (!is_connected(g0)) {
        throw std::invalid_argument("search: start graph must be connected");
    }
    FeatureMask mask;
    try {
        mask = model.feature_mask();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("search: model features unknown: ") + e.what());
    }

    const std::uint64_t feature_seed = derive_seed(config.seed, "featurize");
    Rng rng = make_rng(derive_seed(config.seed, "proposals"));

    const auto t_start = std::chrono::steady_clock::now();
    double feature_ms = 0.0;
    auto predict = [&](const Graph& g) {
        const auto t0 = std::chrono::steady_clock::now();
        const FeatureVector fv = featurize_partial(g, feature_seed, mask);
        feature_ms += std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return model.predict(fv);
    };

    SearchTrace trace;
    trace.initial = g0;
    trace.initial_predicted = predict(g0);

    Graph current = g0;
    double score = trace.initial_predicted;
    int rejected = 0;

    while (static_cast<int>(trace.steps.size()) < config.max_steps) {
        if (rejected >= config.max_proposals_per_step) break;

        std::vector<RewireOpKind> kinds;
        for (RewireOpKind k : config.allowed_ops) {
            if (kind_applicable(current, k)) kinds.push_back(k);
        }
        if (kinds.empty()) break;
        const RewireOpKind kind = kinds[uniform_int(rng, 0, static_cast<int>(kinds.size()) - 1)];

        auto prop = propose(current, kind, rng);
        if (!prop) {
            ++rejected;
            continue;
        }

        const double candidate = predict(prop->graph);
        const double gain = config.mode == SearchMode::Minimize ? score - candidate
                                                                : candidate - score;
        if (gain > 0.0 && gain >= config.epsilon * std::abs(score)) {
            current = std::move(prop->graph);
            score = candidate;
            trace.steps.push_back({static_cast<int>(trace.steps.size()) + 1, prop->op, candidate,
                                   rejected, std::nullopt, feature_ms});
            rejected = 0;
        } else {
            ++rejected;
        }
    }

    trace.status = static_cast<int>(trace.steps.size()) == config.max_steps
                       ? SearchStatus::Completed
                       : SearchStatus::ConvergedLocal;
    trace.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
    return trace;
}

SearchTrace validate_trace(const SearchTrace& trace, const MeasureCallback& measure) {
    SearchTrace out = trace;
    try {
        out.initial_measured = measure(out.initial);
    } catch (const std::exception&) {
        out.initial_measured.reset();
    }
    Graph current = out.initial;
    for (SearchStep& step : out.steps) {
        current = apply_rewire(current, step.op);
        try {
            step.measured = measure(current);
        } catch (const std::exception&) {
            step.measured.reset();
        }
    }
    return out;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted[0];
    const double pos = p * (static_cast<double>(sorted.size()) - 1.0);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<BucketSummary> multi_seed_statistics(const Graph& g0, const RegressionModel& model,
                                                 const SearchConfig& config, int n_seeds,
                                                 int bucket, const MeasureCallback& measure,
                                                 int workers) {
    if (n_seeds < 1) {
        throw std::invalid_argument("multi_seed_statistics: n_seeds must be >= 1");
    }
    if (bucket < 1) {
        throw std::invalid_argument("multi_seed_statistics: bucket width must be >= 1");
    }

    std::vector<SearchTrace> traces(n_seeds);
    parallel_for(n_seeds, workers, [&](int i) {
        SearchConfig run = config;
        run.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
        SearchTrace t = search(g0, model, run);
        traces[i] = measure ? validate_trace(t, measure) : std::move(t);
    });

    int max_step = 0;
    for (const SearchTrace& t : traces) {
        if (!t.steps.empty()) max_step = std::max(max_step, t.steps.back().step);
    }

    std::vector<BucketSummary> out;
    for (int lo = 1; lo <= max_step; lo += bucket) {
        const int hi = lo + bucket - 1;
        std::vector<double> predicted, measured;
        for (const SearchTrace& t : traces) {
            for (const SearchStep& s : t.steps) {
                if (s.step < lo || s.step > hi) continue;
                predicted.push_back(s.predicted);
                if (s.measured) measured.push_back(*s.measured);
            }
        }
        if (predicted.empty()) continue;
        std::sort(predicted.begin(), predicted.end());
        BucketSummary b;
        b.step_lo = lo;
        b.step_hi = hi;
        b.count = static_cast<int>(predicted.size());
        b.predicted_q1 = quantile(predicted, 0.25);
        b.predicted_median = quantile(predicted, 0.5);
        b.predicted_q3 = quantile(predicted, 0.75);
        if (!measured.empty()) {
            std::sort(measured.begin(), measured.end());
            b.measured_q1 = quantile(measured, 0.25);
            b.measured_median = quantile(measured, 0.5);
            b.measured_q3 = quantile(measured, 0.75);
        }
        out.push_back(b);
    }
    return out;
}

namespace {

int operand_count(RewireOpKind kind) {
    switch (kind) {
        case RewireOpKind::AddEdge:
        case RewireOpKind::RemoveEdge: return 2;
        case RewireOpKind::RandomRewire: return 3;
        case RewireOpKind::DoubleSwap: return 4;
    }
    return 0;
}

}  // namespace

void write_search_trace(const std::filesystem::path& jsonl_path, const SearchTrace& trace) {
    std::ostringstream os;
    for (const SearchStep& s : trace.steps) {
        nlohmann::json rec;
        rec["step"] = s.step;
        rec["op_kind"] = to_string(s.op.kind);
        std::vector<int> ops(s.op.operands.begin(),
                             s.op.operands.begin() + operand_count(s.op.kind));
        rec["operands"] = ops;
        rec["predicted"] = s.predicted;
        if (s.measured) rec["measured"] = *s.measured;
        rec["rejected_count"] = s.rejected_before;
        rec["cumulative_feature_time_ms"] = s.cumulative_feature_ms;
        os << rec.dump() << '\n';
    }
    write_file_atomic(jsonl_path, os.str());

    nlohmann::json meta;
    meta["initial_id"] = trace.initial_id;
    meta["initial_predicted"] = trace.initial_predicted;
    if (trace.initial_measured) meta["initial_measured"] = *trace.initial_measured;
    meta["status"] = trace.status == SearchStatus::Completed ? "COMPLETED" : "CONVERGED_LOCAL";
    meta["wall_ms"] = trace.wall_ms;
    meta["n"] = trace.initial.node_count();
    meta["edges"] = trace.initial.edges();
    std::filesystem::path meta_path = jsonl_path;
    meta_path += ".meta.json";
    write_file_atomic(meta_path, meta.dump(2) + "\n");
}

SearchTrace read_search_trace(const std::filesystem::path& jsonl_path) {
    std::filesystem::path meta_path = jsonl_path;
    meta_path += ".meta.json";
    std::ifstream meta_in(meta_path);
    if (!meta_in) {
        throw std::runtime_error("cannot open " + meta_path.string());
    }
    nlohmann::json meta = nlohmann::json::parse(meta_in);

    SearchTrace trace;
    trace.initial_id = meta.at("initial_id").get<std::string>();
    trace.initial_predicted = meta.at("initial_predicted").get<double>();
    if (meta.contains("initial_measured")) {
        trace.initial_measured = meta.at("initial_measured").get<double>();
    }
    trace.status = meta.at("status").get<std::string>() == "COMPLETED"
                       ? SearchStatus::Completed
                       : SearchStatus::ConvergedLocal;
    trace.wall_ms = meta.at("wall_ms").get<double>();
    trace.initial = Graph(meta.at("n").get<int>(),
                          meta.at("edges").get<std::vector<std::pair<int, int>>>());

    std::ifstream in(jsonl_path);
    if (!in) {
        throw std::runtime_error("cannot open " + jsonl_path.string());
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        SearchStep s;
        s.step = rec.at("step").get<int>();
        s.op.kind = rewire_op_kind_from_string(rec.at("op_kind").get<std::string>());
        const auto ops = rec.at("operands").get<std::vector<int>>();
        std::copy(ops.begin(), ops.end(), s.op.operands.begin());
        s.predicted = rec.at("predicted").get<double>();
        if (rec.contains("measured")) s.measured = rec.at("measured").get<double>();
        s.rejected_before = rec.at("rejected_count").get<int>();
        s.cumulative_feature_ms = rec.at("cumulative_feature_time_ms").get<double>();
        trace.steps.push_back(std::move(s));
    }
    return trace;
}

}  // namespace relnas
