#pragma once

#include <array>
#include <bitset>
#include <string>
#include <string_view>
#include <vector>

namespace relnas {

inline constexpr int kFeatureCount = 26;

/// The canonical feature order. Every feature table column, regression
/// subset and membership vector indexes into this order.
enum class Feature : int {
    AverageDegree = 0,
    ClusteringCoefficient,
    Heterogeneity,
    AveragePathLength,
    Bimodularity,
    GreedyModularity,
    Resilience,
    DegreeEntropy,
    WedgeCount,
    GiniIndex,
    AverageNodeConnectivity,
    EdgeConnectivity,
    AverageCloseness,
    AverageClosenessWf,
    AverageEccentricity,
    Diameter,
    Radius,
    AverageEdgeBetweenness,
    AverageNodeBetweenness,
    CentralPointOfDominance,
    CoreNumber,
    LaplacianMin,
    LaplacianMax,
    Transitivity,
    LocalEfficiency,
    GlobalEfficiency,
};

const std::array<std::string, kFeatureCount>& feature_names();

/// Index of a canonical feature name; throws std::invalid_argument on
/// unknown names.
int feature_index(std::string_view name);

struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double& operator[](Feature f) { return values[static_cast<int>(f)]; }
    double operator[](Feature f) const { return values[static_cast<int>(f)]; }
    double& at(int i) { return values.at(i); }
    double at(int i) const { return values.at(i); }
};

using FeatureMask = std::bitset<kFeatureCount>;

FeatureMask mask_for(const std::vector<std::string>& names);
inline FeatureMask all_features_mask() { return FeatureMask().set(); }

}  // namespace relnas
