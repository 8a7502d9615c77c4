#include "relnas/surrogate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "relnas/edgelist.hpp"
#include "relnas/parallel.hpp"
#include "relnas/rng.hpp"

namespace relnas {

Dataset Dataset::with_random_split(std::vector<DatasetRow> rows, std::uint64_t seed,
                                   double test_fraction) {
    Dataset data;
    data.rows = std::move(rows);
    data.split_seed = seed;
    const int n = static_cast<int>(data.rows.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng = make_rng(derive_seed(seed, "split"));
    std::shuffle(order.begin(), order.end(), rng);
    const int test_count = static_cast<int>(std::lround(n * test_fraction));
    data.split.assign(n, Split::Train);
    for (int i = 0; i < test_count; ++i) data.split[order[i]] = Split::Test;
    return data;
}

std::vector<int> Dataset::indices(Split which) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        if (split[i] == which) out.push_back(i);
    }
    return out;
}

double RegressionModel::predict(const FeatureVector& fv) const {
    double y = intercept;
    for (size_t k = 0; k < features.size(); ++k) {
        const double x = fv.at(feature_index(features[k]));
        y += coefficients[k] * (x - means[k]) / stddevs[k];
    }
    return y;
}

std::vector<double> RegressionModel::raw_coefficients() const {
    std::vector<double> raw(coefficients.size());
    for (size_t k = 0; k < coefficients.size(); ++k) raw[k] = coefficients[k] / stddevs[k];
    return raw;
}

double RegressionModel::raw_intercept() const {
    double b = intercept;
    for (size_t k = 0; k < coefficients.size(); ++k) {
        b -= coefficients[k] * means[k] / stddevs[k];
    }
    return b;
}

RegressionModel fit_ols(const Dataset& data, const std::vector<std::string>& subset) {
    const std::vector<int> train = data.indices(Split::Train);
    const int t = static_cast<int>(train.size());
    const int p = static_cast<int>(subset.size());
    if (t == 0) {
        throw std::invalid_argument("fit_ols: empty training split");
    }
    if (t <= p + 1) {
        throw std::invalid_argument("fit_ols: need more training rows than features");
    }

    RegressionModel model;
    model.features = subset;
    model.split_seed = data.split_seed;
    model.means.resize(p);
    model.stddevs.resize(p);

    std::vector<int> cols(p);
    for (int k = 0; k < p; ++k) cols[k] = feature_index(subset[k]);

    Eigen::MatrixXd x(t, p);
    Eigen::VectorXd y(t);
    for (int r = 0; r < t; ++r) {
        const DatasetRow& row = data.rows[train[r]];
        for (int k = 0; k < p; ++k) x(r, k) = row.features.at(cols[k]);
        y(r) = row.target;
    }

    for (int k = 0; k < p; ++k) {
        const double mean = x.col(k).mean();
        const double var = (x.col(k).array() - mean).square().sum() / t;
        const double std_dev = std::sqrt(var);
        if (std_dev <= 0.0) {
            throw std::invalid_argument("fit_ols: feature '" + subset[k] +
                                        "' is constant on the training split");
        }
        model.means[k] = mean;
        model.stddevs[k] = std_dev;
        x.col(k) = (x.col(k).array() - mean) / std_dev;
    }

    model.intercept = y.mean();
    if (p > 0) {
        Eigen::VectorXd yc = y.array() - model.intercept;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        Eigen::VectorXd coef;
        if (qr.rank() < p) {
            // Singular system: ridge with a tiny lambda keeps it finite.
            const double lambda = 1e-8;
            Eigen::MatrixXd normal = x.transpose() * x;
            normal.diagonal().array() += lambda;
            coef = normal.ldlt().solve(x.transpose() * yc);
        } else {
            coef = qr.solve(yc);
        }
        model.coefficients.assign(coef.data(), coef.data() + p);
    }
    return model;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw std::invalid_argument("pearson: size mismatch");
    }
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

Evaluation evaluate_split(const RegressionModel& model, const Dataset& data, Split which) {
    const std::vector<int> idx = data.indices(which);
    if (idx.empty()) {
        throw std::invalid_argument("evaluate: empty split");
    }
    std::vector<double> pred(idx.size()), truth(idx.size());
    double mse = 0.0;
    for (size_t i = 0; i < idx.size(); ++i) {
        pred[i] = model.predict(data.rows[idx[i]].features);
        truth[i] = data.rows[idx[i]].target;
        mse += (pred[i] - truth[i]) * (pred[i] - truth[i]);
    }
    mse /= static_cast<double>(idx.size());
    return {mse, pearson(pred, truth)};
}

Evaluation evaluate(const RegressionModel& model, const Dataset& data) {
    return evaluate_split(model, data, Split::Test);
}

namespace {

SfsTrace sfs_from(const Dataset& data, std::vector<std::string> selected,
                  std::vector<std::string> remaining, int workers) {
    SfsTrace trace;

    // Record the step for an already-forced prefix, if any.
    if (!selected.empty()) {
        RegressionModel model = fit_ols(data, selected);
        Evaluation ev = evaluate(model, data);
        model.test_mse = ev.mse;
        model.test_pearson = ev.pearson_r;
        trace.steps.push_back({selected.back(), ev.mse, ev.pearson_r, std::move(model)});
    }

    while (!remaining.empty()) {
        const int c = static_cast<int>(remaining.size());
        std::vector<Evaluation> evals(c);
        std::vector<RegressionModel> models(c);
        parallel_for(c, workers, [&](int i) {
            std::vector<std::string> candidate = selected;
            candidate.push_back(remaining[i]);
            models[i] = fit_ols(data, candidate);
            evals[i] = evaluate(models[i], data);
        });

        int best = 0;
        for (int i = 1; i < c; ++i) {
            const bool better =
                evals[i].mse < evals[best].mse ||
                (evals[i].mse == evals[best].mse &&
                 feature_index(remaining[i]) < feature_index(remaining[best]));
            if (better) best = i;
        }

        selected.push_back(remaining[best]);
        models[best].test_mse = evals[best].mse;
        models[best].test_pearson = evals[best].pearson_r;
        trace.steps.push_back(
            {remaining[best], evals[best].mse, evals[best].pearson_r, std::move(models[best])});
        remaining.erase(remaining.begin() + best);
    }
    return trace;
}

}  // namespace

SfsTrace sfs(const Dataset& data, const std::vector<std::string>& candidates, int workers) {
    if (candidates.empty()) {
        throw std::invalid_argument("sfs: need at least one candidate feature");
    }
    return sfs_from(data, {}, candidates, workers);
}

SfsTrace sfs_fixed_first(const Dataset& data, const std::string& first,
                         const std::vector<std::string>& candidates, int workers) {
    feature_index(first);  // validates the name
    auto it = std::find(candidates.begin(), candidates.end(), first);
    if (it == candidates.end()) {
        throw std::invalid_argument("sfs_fixed_first: '" + first + "' not among candidates");
    }
    std::vector<std::string> remaining = candidates;
    remaining.erase(remaining.begin() + (it - candidates.begin()));
    return sfs_from(data, {first}, remaining, workers);
}

std::vector<std::vector<double>> feature_set_similarity(const std::vector<SfsTrace>& traces,
                                                        int k) {
    const int t = static_cast<int>(traces.size());
    std::vector<std::vector<double>> membership(t, std::vector<double>(kFeatureCount, 0.0));
    for (int i = 0; i < t; ++i) {
        if (static_cast<int>(traces[i].steps.size()) < k) {
            throw std::invalid_argument("feature_set_similarity: trace shorter than k");
        }
        for (int s = 1; s < k; ++s) {
            membership[i][feature_index(traces[i].steps[s].feature)] = 1.0;
        }
    }
    std::vector<std::vector<double>> sim(t, std::vector<double>(t, 0.0));
    for (int i = 0; i < t; ++i) {
        for (int j = 0; j < t; ++j) {
            sim[i][j] = pearson(membership[i], membership[j]);
        }
    }
    return sim;
}

void save_model(const std::filesystem::path& path, const RegressionModel& model) {
    nlohmann::json doc;
    doc["features"] = model.features;
    doc["coefficients"] = model.coefficients;
    doc["intercept"] = model.intercept;
    doc["means"] = model.means;
    doc["stddevs"] = model.stddevs;
    doc["split_seed"] = model.split_seed;
    doc["metrics"] = {{"test_mse", model.test_mse}, {"test_pearson", model.test_pearson}};
    write_file_atomic(path, doc.dump(2) + "\n");
}

RegressionModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in);
    RegressionModel model;
    model.features = doc.at("features").get<std::vector<std::string>>();
    model.coefficients = doc.at("coefficients").get<std::vector<double>>();
    model.intercept = doc.at("intercept").get<double>();
    model.means = doc.at("means").get<std::vector<double>>();
    model.stddevs = doc.at("stddevs").get<std::vector<double>>();
    model.split_seed = doc.at("split_seed").get<std::uint64_t>();
    model.test_mse = doc.at("metrics").at("test_mse").get<double>();
    model.test_pearson = doc.at("metrics").at("test_pearson").get<double>();
    return model;
}

void write_sfs_trace_csv(const std::filesystem::path& path, const SfsTrace& trace) {
    std::ostringstream os;
    os << "step,feature,test_mse,test_pearson\n";
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const SfsStep& s = trace.steps[i];
        os << (i + 1) << ',' << s.feature << ',' << format_double(s.test_mse) << ','
           << format_double(s.test_pearson) << '\n';
    }
    write_file_atomic(path, os.str());
}

std::vector<SfsStepSummary> read_sfs_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    std::getline(in, line);  // header
    std::vector<SfsStepSummary> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        SfsStepSummary s;
        std::string field;
        std::getline(is, field, ',');
        s.step = std::stoi(field);
        std::getline(is, s.feature, ',');
        std::getline(is, field, ',');
        s.test_mse = std::stod(field);
        std::getline(is, field, ',');
        s.test_pearson = std::stod(field);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace relnas
