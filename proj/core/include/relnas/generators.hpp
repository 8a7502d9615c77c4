#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relnas/graph.hpp"

namespace relnas {

enum class GeneratorKind { WS, WS_FLEX, ER, BA, HARARY, COMPLETE };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& s);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::WS_FLEX;
    int n = 2;
    double degree = 0.0;        // WS / WS_FLEX: average degree target in [2, n-1]
    double rewire_p = 0.0;      // WS / WS_FLEX: rewiring probability in [0, 1]
    double edge_p = 0.0;        // ER: edge probability in [0, 1]
    int attach = 0;             // BA: edges added per new node, in [1, n-1]
    int connectivity = 0;       // HARARY: target connectivity k in [1, n-1]
    std::uint64_t seed = 0;

    static GeneratorSpec ws(int n, double degree, double rewire_p, std::uint64_t seed);
    static GeneratorSpec ws_flex(int n, double degree, double rewire_p, std::uint64_t seed);
    static GeneratorSpec er(int n, double edge_p, std::uint64_t seed);
    static GeneratorSpec ba(int n, int attach, std::uint64_t seed);
    static GeneratorSpec harary(int n, int connectivity);
    static GeneratorSpec complete(int n);
};

/// Deterministic generation from a spec. Random kinds (WS, WS_FLEX, ER) are
/// regenerated with an incremented sub-seed until connected, up to 100
/// attempts, then an error is raised.
Graph generate(const GeneratorSpec& spec);

/// Provenance of a pool entry produced by heterogeneity_augment.
struct AugmentInfo {
    int base_id = 0;
    int round = 0;
    int rewires = 0;
    std::uint64_t seed = 0;
};

struct PoolEntry {
    int id = 0;
    Graph graph;
    GeneratorSpec spec;
    std::optional<AugmentInfo> augmented;
};

struct GraphPool {
    std::vector<PoolEntry> entries;

    int size() const { return static_cast<int>(entries.size()); }
};

/// WS-flex sweep over a (degree x rewiring-p x seed) grid. Degree values are
/// geometrically spaced in [degree_lo, degree_hi]; p values uniformly in
/// [0, 1]. Cells whose generation fails to connect are dropped; ids are dense.
GraphPool ws_flex_sweep(int n, double degree_lo, double degree_hi, int degree_steps,
                        int p_steps, int seeds_per_cell, std::uint64_t base_seed);

/// Appends rewired variants of every input graph: `rounds` variants each,
/// produced by `rewires_per_round` single-endpoint edge moves that keep the
/// graph simple and connected. Original entries are returned unchanged.
GraphPool heterogeneity_augment(const GraphPool& pool, int rounds, int rewires_per_round,
                                std::uint64_t seed);

// Pool persistence: a directory holding `pool.manifest` (one line per graph)
// plus one `<id>.edges` file per graph in the canonical edge-list format.

void write_pool(const std::filesystem::path& dir, const GraphPool& pool);
GraphPool read_pool(const std::filesystem::path& dir);

}  // namespace relnas
