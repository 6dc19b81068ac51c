#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wlforge/coloring.hpp"
#include "wlforge/graph.hpp"
#include "wlforge/higher_order.hpp"
#include "wlforge/matrix.hpp"
#include "wlforge/rng.hpp"

namespace wlforge {

using FeatureMatrix = Matrix<double>;

enum class Activation { identity, relu, sigmoid, sign };
enum class KgnnScope { full, local };
enum class ReadoutMode { sum, mean };
enum class LossKind { mse, bce };

double apply_activation(Activation a, double x);
double activation_grad(Activation a, double pre, double out);

struct GnnLayerParams {
    Matrix<double> w1, w2;
    std::vector<double> bias;
    Activation act = Activation::sigmoid;
};

struct MlpLayer {
    Matrix<double> w;
    std::vector<double> bias;
    Activation act = Activation::identity;
};

// One higher-order branch of the hierarchy: k-set features initialized from
// the previous dimension's output concatenated with the one-hot atomic type.
struct KBranchParams {
    int k = 2;
    KgnnScope scope = KgnnScope::full;
    Matrix<double> init_w;
    Activation init_act = Activation::relu;
    std::vector<AtomicType> iso_alphabet;  // sorted; one-hot slot = position
    std::vector<GnnLayerParams> layers;
};

struct GnnModel {
    std::vector<int> label_alphabet;  // sorted distinct node labels
    std::vector<GnnLayerParams> node_layers;
    std::vector<KBranchParams> branches;  // ascending k
    ReadoutMode readout_mode = ReadoutMode::sum;
    std::vector<MlpLayer> head;
    LossKind loss = LossKind::mse;
    // Sort neighbor rows by value before summation so equal multisets sum
    // bitwise-equal; required by the refinement tests, optional for training.
    bool deterministic_aggregation = false;
};

FeatureMatrix one_hot_labels(const Graph& g, const std::vector<int>& label_alphabet);

// One row per k-set in enumerate_ksets order; alphabet must be sorted.
FeatureMatrix one_hot_atomic_types(const Graph& g, int k, const std::vector<AtomicType>& alphabet);

std::vector<AtomicType> atomic_type_alphabet(std::span<const Graph> graphs, int k);

// Row v = act(F[v] W1 + (sum of neighbor rows) W2 + bias).
FeatureMatrix gnn_layer_basic(const Graph& g, const FeatureMatrix& f, const GnnLayerParams& p,
                              bool deterministic_aggregation = false);

using AggregateFn = std::function<std::vector<double>(const std::vector<std::span<const double>>&)>;
using MergeFn = std::function<std::vector<double>(std::span<const double>, std::span<const double>)>;

// Row v = merge(F[v], aggregate({{F[w] : w in N(v)}})). aggregate must be
// permutation-invariant over its input multiset.
FeatureMatrix gnn_layer_general(const Graph& g, const FeatureMatrix& f, const AggregateFn& aggregate,
                                const MergeFn& merge);

// k-set layer; scope full sums over local+global neighbors, local over local
// neighbors only. Row order is enumerate_ksets order.
FeatureMatrix kgnn_layer(const Graph& g, int k, const FeatureMatrix& f, const GnnLayerParams& p,
                         KgnnScope scope, bool deterministic_aggregation = false);

// Row s = act([one-hot iso type of s, sum of F_prev over (k-1)-subsets] W).
// For k = 2 the previous rows are node features.
FeatureMatrix hierarchical_init(const Graph& g, int k, const FeatureMatrix& f_prev,
                                const Matrix<double>& w, Activation act,
                                const std::vector<AtomicType>& iso_alphabet);

std::vector<double> readout(const FeatureMatrix& f, ReadoutMode mode);

struct LayerCache {
    FeatureMatrix input, nbr_sum, preact, output;
};

struct BranchCache {
    std::vector<std::vector<int>> scope_nbrs;  // merged neighbor indices per set
    std::vector<std::vector<int>> sub_idx;     // (k-1)-subset row indices per set
    std::vector<int> iso_index;
    FeatureMatrix init_concat, init_preact, init_out;
    std::vector<LayerCache> layers;
};

struct ForwardCache {
    FeatureMatrix f0;
    std::vector<LayerCache> node_layers;
    std::vector<BranchCache> branches;
    std::vector<double> pooled;
    std::vector<int> pooled_offsets;  // block start per readout, node level first
    std::vector<std::vector<double>> head_inputs;
    std::vector<std::vector<double>> head_preact;
    std::vector<double> prediction;
};

struct Prediction {
    std::vector<double> value;
    ForwardCache cache;
};

// Runs the node stack, then each configured k-branch (hierarchical init +
// k-GNN stack), concatenates the per-k readouts ascending in k, and applies
// the MLP head.
Prediction forward(const GnnModel& model, const Graph& g);

double loss_value(std::span<const double> prediction, std::span<const double> target, LossKind kind);

// Gradients share the model's shape with all parameter entries replaced.
using GnnGradients = GnnModel;
GnnGradients zeros_like(const GnnModel& model);

struct GradientResult {
    GnnGradients grads;
    double loss = 0.0;
};

// Reverse-mode gradients of the loss w.r.t. every parameter block. The sign
// activation is rejected.
GradientResult gradients(const GnnModel& model, const Graph& g, std::span<const double> target);

void accumulate(GnnGradients& into, const GnnGradients& g);
void scale(GnnGradients& g, double s);

// Parameter blocks in a fixed traversal order; model and gradients walk
// identically.
std::vector<std::span<double>> parameter_blocks(GnnModel& model);

struct TrainConfig {
    double lr = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int epochs = 100;
    int batch_size = 0;  // 0 = full batch
    std::uint64_t seed = 0;
};

struct Sample {
    Graph graph;
    std::vector<double> target;
};

struct TrainLog {
    std::vector<double> epoch_loss;
    std::vector<double> epoch_accuracy;  // filled for bce models
    double final_loss = 0.0;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Deterministic given the seed; fixed-order mini-batches. Aborts with a
// diagnostic when the loss turns non-finite.
TrainLog train(GnnModel& model, const std::vector<Sample>& dataset, const TrainConfig& config);

struct AdamState {
    std::vector<double> m, v;
    long long step = 0;
};

void adam_step(std::vector<std::span<double>>& params, const std::vector<std::span<double>>& grads,
               AdamState& state, const TrainConfig& config);

struct ModelSpec {
    std::vector<int> ks;  // {} for plain 1-GNN, {2}, {2,3}, ...
    int node_layer_count = 3;
    int k_layer_count = 2;
    int hidden = 16;
    int head_hidden = 64;
    int head_layers = 3;
    int output_dim = 1;
    Activation act = Activation::relu;
    KgnnScope scope = KgnnScope::full;
    ReadoutMode readout_mode = ReadoutMode::sum;
    LossKind loss = LossKind::bce;
};

// Alphabets (labels, atomic types) are collected from the dataset; weights are
// uniform(-s, s) with s = 1/sqrt(fan-in).
GnnModel build_model(const ModelSpec& spec, std::span<const Graph> dataset, Rng& rng);

// Partition induced by exact-equality grouping of rows (bitwise).
Coloring row_partition(const FeatureMatrix& f);
// Weaker fallback: rows within max-norm tolerance of a group representative
// share a class.
Coloring row_partition_tolerant(const FeatureMatrix& f, double tol);

}  // namespace wlforge
