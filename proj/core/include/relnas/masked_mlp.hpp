#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "relnas/graph.hpp"

namespace relnas {

/// An MLP whose hidden-to-hidden weight matrices are masked by a relational
/// graph: the block coupling node j's units in one layer to node i's units
/// in the next is active iff (i, j) is an edge or i == j. Input and output
/// layers are dense. Each hidden layer carries its own units-per-node count
/// so FLOP budgets can be matched on a fine integer lattice.
struct MaskedMlpSpec {
    Graph graph;
    int n_layers = 5;                 // hidden layer count
    std::vector<int> units_per_node;  // one entry per hidden layer
    int input_dim = 0;
    int output_dim = 0;

    int hidden_width(int layer) const { return graph.node_count() * units_per_node[layer]; }
    int masked_layer_count() const { return n_layers - 1; }
    bool block_active(int i, int j) const { return i == j || graph.has_edge(i, j); }

    /// Dense 0/1 mask for the weight matrix mapping hidden layer l to l+1.
    Eigen::MatrixXd hidden_mask(int l) const;
};

MaskedMlpSpec make_masked_mlp_spec(const Graph& g, int n_layers, int units_per_node,
                                   int input_dim, int output_dim);

MaskedMlpSpec build_masked_mlp(const Graph& g, int baseline_width, int n_layers, int input_dim,
                               int output_dim);

struct FlopBudget {
    long long flops = 0;
};

/// Multiplies plus adds for one forward pass: 2 per active weight entry.
FlopBudget count_flops(const MaskedMlpSpec& spec);

/// Integer-searches units_per_node so the resulting flops is as close as
/// possible to the reference (within 5% whenever the lattice allows).
MaskedMlpSpec match_flop_budget(const Graph& g, FlopBudget reference, int n_layers,
                                int input_dim, int output_dim);

/// weights[l] maps layer l-1 activations to layer l (row-major out x in);
/// index 0 is the dense input layer, the last is the dense output layer,
/// everything between is masked.
struct MlpParams {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

MlpParams init_params(const MaskedMlpSpec& spec, std::uint64_t seed);

/// Forces masked weight entries to zero in place.
void apply_mask(const MaskedMlpSpec& spec, MlpParams& params);

/// Batch forward pass (rows = samples). ReLU between hidden layers,
/// identity at the output.
Eigen::MatrixXd forward(const MaskedMlpSpec& spec, const MlpParams& params,
                        const Eigen::MatrixXd& batch);

/// Exact gradients for d(loss)/d(logits) = logit_grad; masked positions of
/// the weight gradients are forced to zero.
MlpParams backward(const MaskedMlpSpec& spec, const MlpParams& params,
                   const Eigen::MatrixXd& batch, const Eigen::MatrixXd& logit_grad);

struct ToyDataset {
    Eigen::MatrixXd inputs;   // rows = samples
    std::vector<int> labels;  // in [0, classes)
    int classes = 0;
};

struct TrainSchedule {
    int epochs = 50;
    int batch_size = 128;
    double learning_rate = 0.1;  // cosine-annealed to 0
    double weight_decay = 5e-4;
    double momentum = 0.9;  // Nesterov
    double holdout_fraction = 0.2;
    std::uint64_t seed = 0;
};

struct EpochLog {
    int epoch = 0;
    double learning_rate = 0.0;
    double train_loss = 0.0;
    double val_top1 = 0.0;
};

struct TrainResult {
    MlpParams params;
    double top1_error = 0.0;  // on the held-out split after the last epoch
    std::vector<EpochLog> epochs;
};

/// SGD with Nesterov momentum, cosine-annealed learning rate, weight decay
/// and softmax cross-entropy. Deterministic given the schedule seed; throws
/// on non-finite loss.
TrainResult train_toy(const MaskedMlpSpec& spec, const ToyDataset& data,
                      const TrainSchedule& schedule);

void write_epoch_csv(const std::filesystem::path& path, const std::vector<EpochLog>& epochs);

// Spec + params as one JSON document (mask as a block bitset, params flat).
void save_mlp(const std::filesystem::path& path, const MaskedMlpSpec& spec,
              const MlpParams& params);
std::pair<MaskedMlpSpec, MlpParams> load_mlp(const std::filesystem::path& path);

}  // namespace relnas
