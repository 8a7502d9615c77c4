#include "relnas/features.hpp"

#include <stdexcept>

namespace relnas {

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "average_degree",
        "clustering_coefficient",
        "heterogeneity",
        "average_path_length",
        "bimodularity",
        "greedy_modularity",
        "resilience",
        "degree_entropy",
        "wedge_count",
        "gini_index",
        "average_node_connectivity",
        "edge_connectivity",
        "average_closeness",
        "average_closeness_wf",
        "average_eccentricity",
        "diameter",
        "radius",
        "average_edge_betweenness",
        "average_node_betweenness",
        "central_point_of_dominance",
        "core_number",
        "laplacian_min",
        "laplacian_max",
        "transitivity",
        "local_efficiency",
        "global_efficiency",
    };
    return names;
}

int feature_index(std::string_view name) {
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i) {
        if (names[i] == name) return i;
    }
    throw std::invalid_argument("unknown feature name: " + std::string(name));
}

FeatureMask mask_for(const std::vector<std::string>& names) {
    FeatureMask mask;
    for (const std::string& name : names) mask.set(feature_index(name));
    return mask;
}

}  // namespace relnas
