#include "relnas/masked_mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "relnas/edgelist.hpp"
#include "relnas/rng.hpp"

namespace relnas {

Eigen::MatrixXd MaskedMlpSpec::hidden_mask(int l) const {
    const int n = graph.node_count();
    const int u_in = units_per_node[l];
    const int u_out = units_per_node[l + 1];
    Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(n * u_out, n * u_in);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!block_active(i, j)) continue;
            mask.block(i * u_out, j * u_in, u_out, u_in).setOnes();
        }
    }
    return mask;
}

MaskedMlpSpec make_masked_mlp_spec(const Graph& g, int n_layers, int units_per_node,
                                   int input_dim, int output_dim) {
    if (n_layers < 1 || input_dim < 1 || output_dim < 1 || units_per_node < 1) {
        throw std::invalid_argument("masked mlp: dimensions must be positive");
    }
    return {g, n_layers, std::vector<int>(n_layers, units_per_node), input_dim, output_dim};
}

MaskedMlpSpec build_masked_mlp(const Graph& g, int baseline_width, int n_layers, int input_dim,
                               int output_dim) {
    if (baseline_width % g.node_count() != 0) {
        throw std::invalid_argument("build_masked_mlp: width " + std::to_string(baseline_width) +
                                    " not divisible by node count " +
                                    std::to_string(g.node_count()));
    }
    return make_masked_mlp_spec(g, n_layers, baseline_width / g.node_count(), input_dim,
                                output_dim);
}

FlopBudget count_flops(const MaskedMlpSpec& spec) {
    const long long n = spec.graph.node_count();
    const long long m = spec.graph.edge_count();
    const long long active_blocks = n + 2 * m;
    const auto& units = spec.units_per_node;
    long long flops = 2LL * spec.input_dim * n * units.front() +
                      2LL * n * units.back() * spec.output_dim;
    for (int l = 0; l + 1 < spec.n_layers; ++l) {
        flops += 2LL * active_blocks * units[l] * units[l + 1];
    }
    return {flops};
}

MaskedMlpSpec match_flop_budget(const Graph& g, FlopBudget reference, int n_layers,
                                int input_dim, int output_dim) {
    // Uniform width first (flops grow monotonically in it), then per-layer
    // +/-1 coordinate moves to tighten the match on the finer lattice.
    MaskedMlpSpec spec = make_masked_mlp_spec(g, n_layers, 1, input_dim, output_dim);
    long long best_diff = std::llabs(count_flops(spec).flops - reference.flops);
    for (int u = 2;; ++u) {
        MaskedMlpSpec trial = make_masked_mlp_spec(g, n_layers, u, input_dim, output_dim);
        const long long flops = count_flops(trial).flops;
        if (std::llabs(flops - reference.flops) < best_diff) {
            best_diff = std::llabs(flops - reference.flops);
            spec = trial;
        }
        if (flops >= reference.flops) break;
    }

    bool improved = true;
    while (improved) {
        improved = false;
        for (int l = 0; l < n_layers; ++l) {
            for (int delta : {1, -1}) {
                if (spec.units_per_node[l] + delta < 1) continue;
                MaskedMlpSpec trial = spec;
                trial.units_per_node[l] += delta;
                const long long diff =
                    std::llabs(count_flops(trial).flops - reference.flops);
                if (diff < best_diff) {
                    best_diff = diff;
                    spec = trial;
                    improved = true;
                }
            }
        }
    }
    return spec;
}

namespace {

std::vector<int> layer_dims(const MaskedMlpSpec& spec) {
    std::vector<int> dims{spec.input_dim};
    for (int l = 0; l < spec.n_layers; ++l) dims.push_back(spec.hidden_width(l));
    dims.push_back(spec.output_dim);
    return dims;
}

void check_shapes(const MaskedMlpSpec& spec, const MlpParams& params,
                  const Eigen::MatrixXd& batch) {
    if (static_cast<int>(spec.units_per_node.size()) != spec.n_layers) {
        throw std::invalid_argument("mlp: units_per_node size != n_layers");
    }
    const auto dims = layer_dims(spec);
    const size_t n_mats = dims.size() - 1;
    if (params.weights.size() != n_mats || params.biases.size() != n_mats) {
        throw std::invalid_argument("mlp: parameter count does not match spec");
    }
    for (size_t l = 0; l < n_mats; ++l) {
        if (params.weights[l].rows() != dims[l + 1] || params.weights[l].cols() != dims[l] ||
            params.biases[l].size() != dims[l + 1]) {
            throw std::invalid_argument("mlp: parameter shape mismatch at layer " +
                                        std::to_string(l));
        }
    }
    if (batch.cols() != spec.input_dim) {
        throw std::invalid_argument("mlp: batch width does not match input_dim");
    }
}

// Weight matrix index w maps layer w-1 activations to layer w; the masked
// ones couple hidden layer w-1 to hidden layer w.
bool layer_is_masked(const MaskedMlpSpec& spec, size_t w) {
    return w >= 1 && w < static_cast<size_t>(spec.n_layers);
}

void zero_masked(const MaskedMlpSpec& spec, size_t w, Eigen::MatrixXd& mat) {
    const int n = spec.graph.node_count();
    const int u_in = spec.units_per_node[w - 1];
    const int u_out = spec.units_per_node[w];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (spec.block_active(i, j)) continue;
            mat.block(i * u_out, j * u_in, u_out, u_in).setZero();
        }
    }
}

// Effective weight: mask applied to the hidden-to-hidden layers, so masked
// parameter entries cannot influence the computation regardless of value.
Eigen::MatrixXd effective_weight(const MaskedMlpSpec& spec, const MlpParams& params, size_t w) {
    if (!layer_is_masked(spec, w)) return params.weights[w];
    Eigen::MatrixXd mat = params.weights[w];
    zero_masked(spec, w, mat);
    return mat;
}

}  // namespace

MlpParams init_params(const MaskedMlpSpec& spec, std::uint64_t seed) {
    const auto dims = layer_dims(spec);
    Rng rng = make_rng(derive_seed(seed, "init"));
    std::normal_distribution<double> gauss(0.0, 1.0);

    MlpParams params;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        Eigen::MatrixXd w(dims[l + 1], dims[l]);
        // He-style scale; masked layers use the active fan-in per unit.
        double fan_in = dims[l];
        if (layer_is_masked(spec, l)) {
            const double mean_degree =
                2.0 * spec.graph.edge_count() / spec.graph.node_count() + 1.0;
            fan_in = mean_degree * spec.units_per_node[l - 1];
        }
        const double scale = std::sqrt(2.0 / fan_in);
        for (int r = 0; r < w.rows(); ++r) {
            for (int c = 0; c < w.cols(); ++c) w(r, c) = scale * gauss(rng);
        }
        if (layer_is_masked(spec, l)) zero_masked(spec, l, w);
        params.weights.push_back(std::move(w));
        params.biases.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
    }
    return params;
}

void apply_mask(const MaskedMlpSpec& spec, MlpParams& params) {
    for (size_t l = 0; l < params.weights.size(); ++l) {
        if (layer_is_masked(spec, l)) zero_masked(spec, l, params.weights[l]);
    }
}

Eigen::MatrixXd forward(const MaskedMlpSpec& spec, const MlpParams& params,
                        const Eigen::MatrixXd& batch) {
    check_shapes(spec, params, batch);
    Eigen::MatrixXd act = batch;
    for (size_t l = 0; l < params.weights.size(); ++l) {
        act = (act * effective_weight(spec, params, l).transpose()).rowwise() +
              params.biases[l].transpose();
        if (l + 1 < params.weights.size()) act = act.cwiseMax(0.0);
    }
    return act;
}

MlpParams backward(const MaskedMlpSpec& spec, const MlpParams& params,
                   const Eigen::MatrixXd& batch, const Eigen::MatrixXd& logit_grad) {
    check_shapes(spec, params, batch);
    const size_t n_mats = params.weights.size();
    if (logit_grad.rows() != batch.rows() || logit_grad.cols() != spec.output_dim) {
        throw std::invalid_argument("backward: logit gradient shape mismatch");
    }

    std::vector<Eigen::MatrixXd> weights(n_mats);
    for (size_t l = 0; l < n_mats; ++l) weights[l] = effective_weight(spec, params, l);

    std::vector<Eigen::MatrixXd> pre(n_mats);  // pre-activations per layer
    std::vector<Eigen::MatrixXd> post(n_mats + 1);
    post[0] = batch;
    for (size_t l = 0; l < n_mats; ++l) {
        pre[l] = (post[l] * weights[l].transpose()).rowwise() + params.biases[l].transpose();
        post[l + 1] = l + 1 < n_mats ? pre[l].cwiseMax(0.0) : pre[l];
    }

    MlpParams grads;
    grads.weights.resize(n_mats);
    grads.biases.resize(n_mats);
    Eigen::MatrixXd delta = logit_grad;
    for (size_t l = n_mats; l-- > 0;) {
        grads.weights[l] = delta.transpose() * post[l];
        grads.biases[l] = delta.colwise().sum();
        if (layer_is_masked(spec, l)) zero_masked(spec, l, grads.weights[l]);
        if (l > 0) {
            delta = (delta * weights[l]).array() * (pre[l - 1].array() > 0.0).cast<double>();
        }
    }
    return grads;
}

namespace {

double softmax_xent(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                    const std::vector<int>& rows, Eigen::MatrixXd& grad) {
    const int b = static_cast<int>(rows.size());
    grad.resize(b, logits.cols());
    double loss = 0.0;
    for (int r = 0; r < b; ++r) {
        const Eigen::VectorXd row = logits.row(r);
        const double mx = row.maxCoeff();
        const Eigen::VectorXd ex = (row.array() - mx).exp();
        const double z = ex.sum();
        const int label = labels[rows[r]];
        loss -= std::log(ex(label) / z);
        grad.row(r) = (ex / z).transpose();
        grad(r, label) -= 1.0;
    }
    grad /= static_cast<double>(b);
    return loss / b;
}

double top1_error(const MaskedMlpSpec& spec, const MlpParams& params, const ToyDataset& data,
                  const std::vector<int>& rows) {
    Eigen::MatrixXd x(rows.size(), data.inputs.cols());
    for (size_t i = 0; i < rows.size(); ++i) x.row(i) = data.inputs.row(rows[i]);
    const Eigen::MatrixXd logits = forward(spec, params, x);
    int wrong = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        int arg = 0;
        logits.row(i).maxCoeff(&arg);
        if (arg != data.labels[rows[i]]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(rows.size());
}

}  // namespace

TrainResult train_toy(const MaskedMlpSpec& spec, const ToyDataset& data,
                      const TrainSchedule& schedule) {
    if (data.classes < 2) {
        throw std::invalid_argument("train_toy: need at least two classes");
    }
    if (spec.output_dim != data.classes || data.inputs.cols() != spec.input_dim) {
        throw std::invalid_argument("train_toy: dataset shape does not match spec");
    }

    const int samples = static_cast<int>(data.inputs.rows());
    std::vector<int> order(samples);
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng = make_rng(derive_seed(schedule.seed, "holdout"));
    std::shuffle(order.begin(), order.end(), split_rng);
    const int holdout = std::max(1, static_cast<int>(samples * schedule.holdout_fraction));
    std::vector<int> val_rows(order.begin(), order.begin() + holdout);
    std::vector<int> train_rows(order.begin() + holdout, order.end());

    MlpParams params = init_params(spec, schedule.seed);
    MlpParams velocity;
    for (size_t l = 0; l < params.weights.size(); ++l) {
        velocity.weights.push_back(
            Eigen::MatrixXd::Zero(params.weights[l].rows(), params.weights[l].cols()));
        velocity.biases.push_back(Eigen::VectorXd::Zero(params.biases[l].size()));
    }

    Rng epoch_rng = make_rng(derive_seed(schedule.seed, "batches"));
    TrainResult result;

    for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
        const double lr = schedule.learning_rate * 0.5 *
                          (1.0 + std::cos(M_PI * epoch / std::max(1, schedule.epochs)));
        std::shuffle(train_rows.begin(), train_rows.end(), epoch_rng);

        double epoch_loss = 0.0;
        int batches = 0;
        for (size_t start = 0; start < train_rows.size(); start += schedule.batch_size) {
            const size_t end = std::min(start + schedule.batch_size, train_rows.size());
            std::vector<int> rows(train_rows.begin() + start, train_rows.begin() + end);
            Eigen::MatrixXd x(rows.size(), spec.input_dim);
            for (size_t i = 0; i < rows.size(); ++i) x.row(i) = data.inputs.row(rows[i]);

            const Eigen::MatrixXd logits = forward(spec, params, x);
            Eigen::MatrixXd logit_grad;
            const double loss = softmax_xent(logits, data.labels, rows, logit_grad);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train_toy: loss diverged at epoch " +
                                         std::to_string(epoch));
            }
            epoch_loss += loss;
            ++batches;

            MlpParams grads = backward(spec, params, x, logit_grad);
            for (size_t l = 0; l < params.weights.size(); ++l) {
                Eigen::MatrixXd gw = grads.weights[l] + schedule.weight_decay * params.weights[l];
                Eigen::VectorXd gb = grads.biases[l] + schedule.weight_decay * params.biases[l];
                if (layer_is_masked(spec, l)) zero_masked(spec, l, gw);
                velocity.weights[l] = schedule.momentum * velocity.weights[l] + gw;
                velocity.biases[l] = schedule.momentum * velocity.biases[l] + gb;
                // Nesterov step.
                params.weights[l] -= lr * (gw + schedule.momentum * velocity.weights[l]);
                params.biases[l] -= lr * (gb + schedule.momentum * velocity.biases[l]);
            }
        }

        result.epochs.push_back({epoch, lr, batches > 0 ? epoch_loss / batches : 0.0,
                                 top1_error(spec, params, data, val_rows)});
    }

    result.top1_error = top1_error(spec, params, data, val_rows);
    result.params = std::move(params);
    return result;
}

void write_epoch_csv(const std::filesystem::path& path, const std::vector<EpochLog>& epochs) {
    std::ostringstream os;
    os << "epoch,lr,train_loss,val_top1\n";
    for (const EpochLog& e : epochs) {
        os << e.epoch << ',' << format_double(e.learning_rate) << ','
           << format_double(e.train_loss) << ',' << format_double(e.val_top1) << '\n';
    }
    write_file_atomic(path, os.str());
}

void save_mlp(const std::filesystem::path& path, const MaskedMlpSpec& spec,
              const MlpParams& params) {
    nlohmann::json doc;
    doc["n_layers"] = spec.n_layers;
    doc["units_per_node"] = spec.units_per_node;
    doc["input_dim"] = spec.input_dim;
    doc["output_dim"] = spec.output_dim;
    doc["graph"] = {{"n", spec.graph.node_count()}, {"edges", spec.graph.edges()}};

    const int n = spec.graph.node_count();
    std::string bits(static_cast<size_t>(n) * n, '0');
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (spec.block_active(i, j)) bits[static_cast<size_t>(i) * n + j] = '1';
        }
    }
    doc["block_mask"] = bits;

    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (size_t l = 0; l < params.weights.size(); ++l) {
        const auto& w = params.weights[l];
        std::vector<double> flat(w.data(), w.data() + w.size());
        weights.push_back({{"rows", w.rows()}, {"cols", w.cols()}, {"data", flat}});
        const auto& b = params.biases[l];
        biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
    }
    doc["weights"] = weights;
    doc["biases"] = biases;
    write_file_atomic(path, doc.dump() + "\n");
}

std::pair<MaskedMlpSpec, MlpParams> load_mlp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in);
    MaskedMlpSpec spec{
        Graph(doc.at("graph").at("n").get<int>(),
              doc.at("graph").at("edges").get<std::vector<std::pair<int, int>>>()),
        doc.at("n_layers").get<int>(), doc.at("units_per_node").get<std::vector<int>>(),
        doc.at("input_dim").get<int>(), doc.at("output_dim").get<int>()};

    MlpParams params;
    for (const auto& w : doc.at("weights")) {
        Eigen::MatrixXd mat(w.at("rows").get<int>(), w.at("cols").get<int>());
        const auto flat = w.at("data").get<std::vector<double>>();
        std::copy(flat.begin(), flat.end(), mat.data());
        params.weights.push_back(std::move(mat));
    }
    for (const auto& b : doc.at("biases")) {
        const auto flat = b.get<std::vector<double>>();
        Eigen::VectorXd vec(flat.size());
        std::copy(flat.begin(), flat.end(), vec.data());
        params.biases.push_back(std::move(vec));
    }
    return {std::move(spec), std::move(params)};
}

}  // namespace relnas
