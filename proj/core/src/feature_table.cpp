#include "relnas/feature_table.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "relnas/edgelist.hpp"

namespace relnas {

void write_feature_table(const std::filesystem::path& path,
                         const std::vector<FeatureTableRow>& rows) {
    const bool has_target = !rows.empty() && rows.front().target.has_value();
    const bool has_time = !rows.empty() && rows.front().feature_time_ms.has_value();

    std::ostringstream os;
    os << "graph_id";
    for (const std::string& name : feature_names()) os << ',' << name;
    if (has_target) os << ",top1_error";
    if (has_time) os << ",feature_time_ms";
    os << '\n';

    for (const FeatureTableRow& row : rows) {
        os << row.graph_id;
        for (int i = 0; i < kFeatureCount; ++i) os << ',' << format_double(row.features.at(i));
        if (has_target) os << ',' << format_double(row.target.value());
        if (has_time) os << ',' << format_double(row.feature_time_ms.value());
        os << '\n';
    }
    write_file_atomic(path, os.str());
}

std::vector<FeatureTableRow> read_feature_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("feature table: empty file " + path.string());
    }

    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) header.push_back(col);
    }
    if (header.empty() || header[0] != "graph_id") {
        throw std::runtime_error("feature table: first column must be graph_id");
    }
    // Column -> canonical feature index (or target / timing slots).
    std::vector<int> feature_col(header.size(), -1);
    int target_col = -1, time_col = -1;
    for (size_t c = 1; c < header.size(); ++c) {
        if (header[c] == "top1_error") {
            target_col = static_cast<int>(c);
        } else if (header[c] == "feature_time_ms") {
            time_col = static_cast<int>(c);
        } else {
            feature_col[c] = feature_index(header[c]);
        }
    }

    std::vector<FeatureTableRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string field;
        FeatureTableRow row;
        for (size_t c = 0; c < header.size(); ++c) {
            if (!std::getline(is, field, ',')) {
                throw std::runtime_error("feature table: short row in " + path.string());
            }
            if (c == 0) {
                row.graph_id = field;
            } else if (static_cast<int>(c) == target_col) {
                row.target = std::stod(field);
            } else if (static_cast<int>(c) == time_col) {
                row.feature_time_ms = std::stod(field);
            } else {
                row.features.at(feature_col[c]) = std::stod(field);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace relnas
