#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relnas/graph.hpp"
#include "relnas/rng.hpp"
#include "relnas/surrogate.hpp"

namespace relnas {

enum class RewireOpKind { AddEdge, RemoveEdge, DoubleSwap, RandomRewire };

std::string to_string(RewireOpKind kind);
RewireOpKind rewire_op_kind_from_string(const std::string& s);

inline constexpr std::array<RewireOpKind, 4> kAllRewireOps = {
    RewireOpKind::AddEdge, RewireOpKind::RemoveEdge, RewireOpKind::DoubleSwap,
    RewireOpKind::RandomRewire};

/// One applied rewiring. Operand meaning by kind:
///   AddEdge / RemoveEdge: (u, v)
///   DoubleSwap: (u, v, x, y) -- edges (u,v),(x,y) replaced by (u,x),(v,y)
///   RandomRewire: (u, v, w) -- edge (u,v) replaced by (u,w)
struct RewireOp {
    RewireOpKind kind = RewireOpKind::AddEdge;
    std::array<int, 4> operands{-1, -1, -1, -1};
};

/// Applies op to g; throws if the operands are invalid for g.
Graph apply_rewire(const Graph& g, const RewireOp& op);

struct Proposal {
    Graph graph;
    RewireOp op;
};

/// Draws a random applicable operand set for `kind` and returns the rewired
/// graph, resampling up to `retry_budget` times until the result is simple
/// and connected. nullopt when no valid operand was found (NOT_APPLICABLE).
std::optional<Proposal> propose(const Graph& g, RewireOpKind kind, Rng& rng,
                                int retry_budget = 50);

/// Chains `steps` accepted proposals of one kind; stops early when the
/// operator becomes inapplicable. Returns every intermediate graph.
std::vector<Graph> rewire_chain(const Graph& g, RewireOpKind kind, int steps, Rng& rng);

enum class SearchMode { Minimize, Maximize };

struct SearchConfig {
    double epsilon = 0.01;            // accepted relative improvement, in (0,1)
    int max_steps = 100;              // K
    int max_proposals_per_step = 200;
    SearchMode mode = SearchMode::Minimize;
    std::uint64_t seed = 0;
    std::vector<RewireOpKind> allowed_ops{kAllRewireOps.begin(), kAllRewireOps.end()};
};

enum class SearchStatus { Completed, ConvergedLocal };

struct SearchStep {
    int step = 0;  // 1-based index of the accepted step
    RewireOp op;
    double predicted = 0.0;
    int rejected_before = 0;  // proposals rejected since the previous accept
    std::optional<double> measured;
    double cumulative_feature_ms = 0.0;
};

struct SearchTrace {
    std::string initial_id;
    Graph initial;
    double initial_predicted = 0.0;
    std::optional<double> initial_measured;
    std::vector<SearchStep> steps;
    SearchStatus status = SearchStatus::ConvergedLocal;
    double wall_ms = 0.0;

    /// Graph after the first `upto_steps` accepted steps.
    Graph replay(int upto_steps) const;
    Graph final_graph() const { return replay(static_cast<int>(steps.size())); }
};

/// Greedy surrogate-guided search. A proposal is accepted when the predicted
/// score moves in the configured direction by at least epsilon relative to
/// the current prediction; otherwise it is discarded and a new proposal is
/// drawn, up to max_proposals_per_step per step.
SearchTrace search(const Graph& g0, const RegressionModel& model, const SearchConfig& config);

using MeasureCallback = std::function<double(const Graph&)>;

/// Attaches measured scores to every accepted step (and the initial graph).
/// A callback failure leaves that step's measured score empty and continues.
SearchTrace validate_trace(const SearchTrace& trace, const MeasureCallback& measure);

struct BucketSummary {
    int step_lo = 0;  // inclusive, 1-based
    int step_hi = 0;  // inclusive
    int count = 0;
    double predicted_median = 0.0;
    double predicted_q1 = 0.0;
    double predicted_q3 = 0.0;
    std::optional<double> measured_median;
    std::optional<double> measured_q1;
    std::optional<double> measured_q3;
};

/// Runs the search under n_seeds derived seeds and groups accepted steps
/// into contiguous step ranges of width `bucket`, reporting per-bucket
/// quartiles of the predicted (and, with a callback, measured) scores.
std::vector<BucketSummary> multi_seed_statistics(const Graph& g0, const RegressionModel& model,
                                                 const SearchConfig& config, int n_seeds,
                                                 int bucket, const MeasureCallback& measure = {},
                                                 int workers = 1);

// Persistence: accepted steps as line-delimited JSON plus a small sidecar
// with the initial graph and run status.

void write_search_trace(const std::filesystem::path& jsonl_path, const SearchTrace& trace);
SearchTrace read_search_trace(const std::filesystem::path& jsonl_path);

}  // namespace relnas
