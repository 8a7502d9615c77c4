#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <set>

#include "oracles/naive_metrics.hpp"
#include "relnas/metrics.hpp"
#include "relnas/rng.hpp"
#include "relnas/surrogate.hpp"

using namespace relnas;
using doctest::Approx;

namespace {

// Feature rows from a small random-graph corpus; targets filled by callers.
std::vector<DatasetRow> corpus_rows(int count, std::uint64_t seed) {
    const auto graphs = oracle::fuzz_corpus(count, 5, 10, seed);
    std::vector<DatasetRow> rows;
    for (size_t i = 0; i < graphs.size(); ++i) {
        rows.push_back({std::to_string(i), featurize(graphs[i], seed), 0.0});
    }
    return rows;
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("split respects the ratio and is disjoint") {
    auto rows = corpus_rows(100, 1);
    const Dataset data = Dataset::with_random_split(std::move(rows), 42, 0.1);
    CHECK(data.indices(Split::Test).size() == 10);
    CHECK(data.indices(Split::Train).size() == 90);

    const Dataset again = Dataset::with_random_split(corpus_rows(100, 1), 42, 0.1);
    CHECK(again.split == data.split);
}

TEST_CASE("constant target gives the constant model") {
    auto rows = corpus_rows(60, 2);
    for (auto& r : rows) r.target = 3.0;
    const Dataset data = Dataset::with_random_split(std::move(rows), 7, 0.1);
    const RegressionModel model = fit_ols(data, {"average_degree", "diameter"});
    CHECK(model.intercept == Approx(3.0));
    for (double c : model.coefficients) CHECK(c == Approx(0.0).epsilon(1e-10));
    const Evaluation ev = evaluate(model, data);
    CHECK(ev.mse == Approx(0.0).epsilon(1e-18));
}

TEST_CASE("recovers a synthetic linear target") {
    auto rows = corpus_rows(80, 3);
    for (auto& r : rows) r.target = 2.0 * r.features[Feature::AverageDegree] + 1.0;
    const Dataset data = Dataset::with_random_split(std::move(rows), 11, 0.1);
    const RegressionModel model = fit_ols(data, {"average_degree"});

    CHECK(model.raw_coefficients()[0] == Approx(2.0).epsilon(1e-8));
    CHECK(model.raw_intercept() == Approx(1.0).epsilon(1e-8));
    CHECK(evaluate(model, data).mse == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rejects constant features and tiny training splits") {
    auto rows = corpus_rows(40, 4);
    for (auto& r : rows) {
        r.features[Feature::GiniIndex] = 0.5;  // forced constant column
        r.target = 1.0;
    }
    const Dataset data = Dataset::with_random_split(std::move(rows), 5, 0.1);
    CHECK_THROWS_AS(fit_ols(data, {"gini_index"}), std::invalid_argument);

    Dataset tiny = Dataset::with_random_split(corpus_rows(4, 5), 5, 0.25);
    CHECK_THROWS_AS(fit_ols(tiny, {"average_degree", "diameter", "radius"}),
                    std::invalid_argument);
}

TEST_CASE("collinear duplicate features fall back to ridge") {
    auto rows = corpus_rows(60, 6);
    for (auto& r : rows) {
        // Make closeness an exact copy of global efficiency.
        r.features[Feature::AverageCloseness] = r.features[Feature::GlobalEfficiency];
        r.target = r.features[Feature::GlobalEfficiency];
    }
    const Dataset data = Dataset::with_random_split(std::move(rows), 13, 0.1);
    const RegressionModel model = fit_ols(data, {"global_efficiency", "average_closeness"});
    for (double c : model.coefficients) CHECK(std::isfinite(c));
}

TEST_CASE("evaluate trivials") {
    auto rows = corpus_rows(50, 7);
    for (auto& r : rows) r.target = r.features[Feature::AverageDegree];
    const Dataset data = Dataset::with_random_split(std::move(rows), 3, 0.1);

    const RegressionModel exact = fit_ols(data, {"average_degree"});
    const Evaluation ev = evaluate(exact, data);
    CHECK(ev.mse == Approx(0.0).epsilon(1e-15));
    CHECK(ev.pearson_r == Approx(1.0).epsilon(1e-9));

    // predictions = -targets
    RegressionModel negated = exact;
    for (double& c : negated.coefficients) c = -c;
    negated.intercept = -negated.intercept;
    CHECK(evaluate(negated, data).pearson_r == Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("pearson is defined 0 for flat inputs") {
    CHECK(pearson({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}) == 0.0);
}

TEST_CASE("sfs with one candidate") {
    auto rows = corpus_rows(50, 8);
    for (auto& r : rows) r.target = r.features[Feature::Diameter];
    const Dataset data = Dataset::with_random_split(std::move(rows), 4, 0.1);
    const SfsTrace trace = sfs(data, {"diameter"});
    REQUIRE(trace.steps.size() == 1);
    CHECK(trace.steps[0].feature == "diameter");
    CHECK_THROWS_AS(sfs(data, {}), std::invalid_argument);
}

TEST_CASE("sfs finds the two generating features first") {
    auto rows = corpus_rows(120, 9);
    Rng rng = make_rng(10);
    for (auto& r : rows) {
        r.target = 0.8 * r.features[Feature::AverageDegree] -
                   0.5 * r.features[Feature::ClusteringCoefficient] +
                   1e-7 * uniform_real(rng);
    }
    const Dataset data = Dataset::with_random_split(std::move(rows), 21, 0.1);
    const std::vector<std::string> candidates{"average_degree", "clustering_coefficient",
                                              "diameter", "gini_index", "core_number"};
    const SfsTrace trace = sfs(data, candidates);
    REQUIRE(trace.steps.size() == candidates.size());
    std::set<std::string> first_two{trace.steps[0].feature, trace.steps[1].feature};
    CHECK(first_two == std::set<std::string>{"average_degree", "clustering_coefficient"});
    CHECK(trace.steps[1].test_mse < 1e-9);
}

TEST_CASE("train MSE is non-increasing along the trace") {
    auto rows = corpus_rows(90, 12);
    Rng rng = make_rng(12);
    for (auto& r : rows) r.target = uniform_real(rng);
    const Dataset data = Dataset::with_random_split(std::move(rows), 8, 0.1);

    const std::vector<std::string> candidates{
        "average_degree", "clustering_coefficient", "diameter", "radius",
        "gini_index",     "global_efficiency",      "core_number"};
    const SfsTrace trace = sfs(data, candidates);
    double prev = std::numeric_limits<double>::infinity();
    for (const SfsStep& step : trace.steps) {
        const double train_mse = evaluate_split(step.model, data, Split::Train).mse;
        CHECK(train_mse <= prev + 1e-10);
        prev = train_mse;
    }
}

TEST_CASE("fixed-first equals plain sfs when it would pick that feature anyway") {
    auto rows = corpus_rows(80, 13);
    for (auto& r : rows) r.target = r.features[Feature::AveragePathLength];
    const Dataset data = Dataset::with_random_split(std::move(rows), 31, 0.1);
    const std::vector<std::string> candidates{"average_path_length", "gini_index",
                                              "core_number"};
    const SfsTrace plain = sfs(data, candidates);
    REQUIRE(plain.steps[0].feature == "average_path_length");
    const SfsTrace forced = sfs_fixed_first(data, "average_path_length", candidates);
    REQUIRE(forced.steps.size() == plain.steps.size());
    for (size_t i = 0; i < plain.steps.size(); ++i) {
        CHECK(forced.steps[i].feature == plain.steps[i].feature);
        CHECK(forced.steps[i].test_mse == Approx(plain.steps[i].test_mse));
    }
    CHECK_THROWS_AS(sfs_fixed_first(data, "no_such_feature", candidates),
                    std::invalid_argument);
    CHECK_THROWS_AS(sfs_fixed_first(data, "diameter", candidates), std::invalid_argument);
}

TEST_CASE("sfs over all 26 candidates yields a full-length trace") {
    auto rows = corpus_rows(150, 14);
    Rng rng = make_rng(14);
    for (auto& r : rows) {
        r.target = 0.3 * r.features[Feature::AverageEccentricity] + 0.05 * uniform_real(rng);
    }
    const Dataset data = Dataset::with_random_split(std::move(rows), 17, 0.1);
    const std::vector<std::string> all(feature_names().begin(), feature_names().end());
    const SfsTrace trace = sfs_fixed_first(data, "average_eccentricity", all, 2);
    CHECK(trace.steps.size() == kFeatureCount);
    CHECK(trace.steps[0].feature == "average_eccentricity");
}

TEST_CASE("predictions are invariant to affine feature rescaling") {
    auto rows = corpus_rows(70, 15);
    Rng rng = make_rng(15);
    for (auto& r : rows) r.target = uniform_real(rng);
    Dataset data = Dataset::with_random_split(std::move(rows), 23, 0.1);
    const RegressionModel before = fit_ols(data, {"average_degree", "wedge_count"});

    Dataset scaled = data;
    for (auto& r : scaled.rows) r.features[Feature::WedgeCount] *= 10.0;
    const RegressionModel after = fit_ols(scaled, {"average_degree", "wedge_count"});

    for (size_t i = 0; i < data.rows.size(); ++i) {
        CHECK(before.predict(data.rows[i].features) ==
              Approx(after.predict(scaled.rows[i].features)).epsilon(1e-9));
    }
}

TEST_CASE("feature set similarity trivials") {
    // Two identical traces, one complementary over an even split.
    auto rows = corpus_rows(60, 16);
    for (auto& r : rows) r.target = r.features[Feature::AverageDegree];
    const Dataset data = Dataset::with_random_split(std::move(rows), 2, 0.1);
    const std::vector<std::string> candidates{"average_degree", "diameter", "radius",
                                              "gini_index", "core_number"};
    const SfsTrace t = sfs(data, candidates);
    const auto sim = feature_set_similarity({t, t}, 3);
    CHECK(sim[0][0] == Approx(1.0));
    CHECK(sim[0][1] == Approx(1.0));

    // Hand-built membership check through pearson directly: complementary
    // binary vectors over an even split correlate at -1.
    std::vector<double> a(kFeatureCount, 0.0), b(kFeatureCount, 1.0);
    for (int i = 0; i < kFeatureCount / 2; ++i) {
        a[i] = 1.0;
        b[i] = 0.0;
    }
    CHECK(pearson(a, b) == Approx(-1.0));
}

TEST_CASE("model JSON round-trip") {
    auto rows = corpus_rows(50, 18);
    for (auto& r : rows) r.target = r.features[Feature::Radius];
    const Dataset data = Dataset::with_random_split(std::move(rows), 6, 0.1);
    RegressionModel model = fit_ols(data, {"radius", "diameter"});
    const Evaluation ev = evaluate(model, data);
    model.test_mse = ev.mse;
    model.test_pearson = ev.pearson_r;

    const auto path = std::filesystem::temp_directory_path() / "relnas_model.json";
    save_model(path, model);
    const RegressionModel loaded = load_model(path);
    CHECK(loaded.features == model.features);
    CHECK(loaded.coefficients == model.coefficients);
    CHECK(loaded.intercept == model.intercept);
    CHECK(loaded.means == model.means);
    CHECK(loaded.stddevs == model.stddevs);
    CHECK(loaded.split_seed == model.split_seed);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
