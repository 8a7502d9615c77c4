#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "relnas/features.hpp"

namespace relnas {

enum class Split { Train, Test };

struct DatasetRow {
    std::string graph_id;
    FeatureVector features;
    double target = 0.0;
};

/// Feature rows with a seeded random train/test split (default ratio 9:1).
struct Dataset {
    std::vector<DatasetRow> rows;
    std::vector<Split> split;
    std::uint64_t split_seed = 0;

    static Dataset with_random_split(std::vector<DatasetRow> rows, std::uint64_t seed,
                                     double test_fraction = 0.1);

    std::vector<int> indices(Split which) const;
};

/// OLS coefficients over standardized features plus the standardization
/// constants needed to predict on raw feature vectors.
struct RegressionModel {
    std::vector<std::string> features;
    std::vector<double> coefficients;  // per standardized feature
    double intercept = 0.0;
    std::vector<double> means;
    std::vector<double> stddevs;
    std::uint64_t split_seed = 0;
    double test_mse = 0.0;
    double test_pearson = 0.0;

    double predict(const FeatureVector& fv) const;
    FeatureMask feature_mask() const { return mask_for(features); }

    /// Slope per raw (unstandardized) feature and the matching intercept.
    std::vector<double> raw_coefficients() const;
    double raw_intercept() const;
};

/// Least squares on standardized TRAIN features; falls back to ridge with
/// lambda = 1e-8 when the normal equations are singular (e.g. exactly
/// collinear columns).
RegressionModel fit_ols(const Dataset& data, const std::vector<std::string>& subset);

struct Evaluation {
    double mse = 0.0;
    double pearson_r = 0.0;  // 0 when either side has zero variance
};

Evaluation evaluate_split(const RegressionModel& model, const Dataset& data, Split which);

/// Evaluation on the TEST rows.
Evaluation evaluate(const RegressionModel& model, const Dataset& data);

struct SfsStep {
    std::string feature;
    double test_mse = 0.0;
    double test_pearson = 0.0;
    RegressionModel model;
};

struct SfsTrace {
    std::vector<SfsStep> steps;
};

/// Sequential forward selection: each step adds the candidate minimizing
/// TEST MSE of the refit model (ties broken by canonical feature order) and
/// runs until all candidates are added.
SfsTrace sfs(const Dataset& data, const std::vector<std::string>& candidates, int workers = 1);

/// SFS with a forced first feature, then greedy over the remainder.
SfsTrace sfs_fixed_first(const Dataset& data, const std::string& first,
                         const std::vector<std::string>& candidates, int workers = 1);

/// For each trace take the k-1 features selected after its fixed first,
/// encode them as a binary membership vector over the canonical features and
/// return the Pearson correlation between every pair of vectors.
std::vector<std::vector<double>> feature_set_similarity(const std::vector<SfsTrace>& traces,
                                                        int k);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Persistence.

void save_model(const std::filesystem::path& path, const RegressionModel& model);
RegressionModel load_model(const std::filesystem::path& path);

void write_sfs_trace_csv(const std::filesystem::path& path, const SfsTrace& trace);

struct SfsStepSummary {
    int step = 0;
    std::string feature;
    double test_mse = 0.0;
    double test_pearson = 0.0;
};
std::vector<SfsStepSummary> read_sfs_trace_csv(const std::filesystem::path& path);

}  // namespace relnas
