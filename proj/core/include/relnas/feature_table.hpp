#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relnas/features.hpp"

namespace relnas {

/// One feature-table row: graph_id, the 26 canonical columns, then the
/// optional top1_error target and the optional per-graph featurize time.
struct FeatureTableRow {
    std::string graph_id;
    FeatureVector features;
    std::optional<double> target;
    std::optional<double> feature_time_ms;
};

void write_feature_table(const std::filesystem::path& path,
                         const std::vector<FeatureTableRow>& rows);

std::vector<FeatureTableRow> read_feature_table(const std::filesystem::path& path);

}  // namespace relnas
