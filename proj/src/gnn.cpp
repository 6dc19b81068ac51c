#include "wlforge/gnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <stdexcept>

namespace wlforge {

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::identity: return x;
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::sign: return x > 0.0 ? 1.0 : -1.0;
    }
    throw std::logic_error("apply_activation: bad tag");
}

double activation_grad(Activation a, double pre, double out) {
    switch (a) {
        case Activation::identity: return 1.0;
        case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::sigmoid: return out * (1.0 - out);
        case Activation::sign:
            throw std::invalid_argument("gradients: sign activation is not differentiable");
    }
    throw std::logic_error("activation_grad: bad tag");
}

FeatureMatrix one_hot_labels(const Graph& g, const std::vector<int>& label_alphabet) {
    FeatureMatrix f(g.node_count(), static_cast<int>(label_alphabet.size()));
    for (int v = 0; v < g.node_count(); ++v) {
        auto it = std::lower_bound(label_alphabet.begin(), label_alphabet.end(), g.label(v));
        if (it == label_alphabet.end() || *it != g.label(v))
            throw std::invalid_argument("one_hot_labels: label outside model alphabet");
        f.at(v, static_cast<int>(it - label_alphabet.begin())) = 1.0;
    }
    return f;
}

std::vector<AtomicType> atomic_type_alphabet(std::span<const Graph> graphs, int k) {
    std::vector<AtomicType> out;
    for (const Graph& g : graphs) {
        if (g.node_count() < k) continue;
        for (const KSet& s : enumerate_ksets(g, k)) out.push_back(atomic_type_set(g, s));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

int atomic_index(const std::vector<AtomicType>& alphabet, const AtomicType& t) {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), t);
    if (it == alphabet.end() || !(*it == t))
        throw std::invalid_argument("atomic type outside model alphabet");
    return static_cast<int>(it - alphabet.begin());
}

// IEEE total-order key so sorting is deterministic for every bit pattern.
std::uint64_t total_order_key(double d) {
    const std::uint64_t u = std::bit_cast<std::uint64_t>(d);
    return (u & 0x8000000000000000ULL) ? ~u : (u | 0x8000000000000000ULL);
}

bool row_less(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::uint64_t ka = total_order_key(a[i]), kb = total_order_key(b[i]);
        if (ka != kb) return ka < kb;
    }
    return false;
}

FeatureMatrix neighbor_sums(const FeatureMatrix& f, const std::vector<std::vector<int>>& nbrs,
                            bool deterministic) {
    FeatureMatrix out(static_cast<int>(nbrs.size()), f.cols());
    std::vector<std::span<const double>> rows;
    for (std::size_t v = 0; v < nbrs.size(); ++v) {
        if (deterministic) {
            rows.clear();
            for (int u : nbrs[v]) rows.push_back(f.row(u));
            std::sort(rows.begin(), rows.end(),
                      [](auto a, auto b) { return row_less(a, b); });
            for (auto r : rows)
                for (int c = 0; c < f.cols(); ++c) out.at(static_cast<int>(v), c) += r[c];
        } else {
            for (int u : nbrs[v])
                for (int c = 0; c < f.cols(); ++c) out.at(static_cast<int>(v), c) += f.at(u, c);
        }
    }
    return out;
}

void check_layer_shapes(const FeatureMatrix& f, const GnnLayerParams& p, const char* who) {
    if (p.w1.rows() != f.cols() || p.w2.rows() != f.cols() || p.w1.cols() != p.w2.cols() ||
        static_cast<int>(p.bias.size()) != p.w1.cols())
        throw std::invalid_argument(std::string(who) + ": parameter shape mismatch");
}

LayerCache run_layer(const FeatureMatrix& in, const std::vector<std::vector<int>>& nbrs,
                     const GnnLayerParams& p, bool deterministic) {
    check_layer_shapes(in, p, "gnn layer");
    LayerCache c;
    c.input = in;
    c.nbr_sum = neighbor_sums(in, nbrs, deterministic);
    c.preact = c.input * p.w1 + c.nbr_sum * p.w2;
    for (int r = 0; r < c.preact.rows(); ++r)
        for (int j = 0; j < c.preact.cols(); ++j) c.preact.at(r, j) += p.bias[j];
    c.output = c.preact;
    for (double& x : c.output.data()) x = apply_activation(p.act, x);
    return c;
}

std::vector<std::vector<int>> graph_adjacency(const Graph& g) {
    std::vector<std::vector<int>> nbrs(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) nbrs[v] = g.neighbors(v);
    return nbrs;
}

std::vector<std::vector<int>> scope_neighbors(const RefineDomain& d, KgnnScope scope) {
    std::vector<std::vector<int>> nbrs(d.size);
    for (std::size_t s = 0; s < d.size; ++s) {
        nbrs[s] = d.nbrs_local[s];
        if (scope == KgnnScope::full)
            nbrs[s].insert(nbrs[s].end(), d.nbrs_global[s].begin(), d.nbrs_global[s].end());
        std::sort(nbrs[s].begin(), nbrs[s].end());
    }
    return nbrs;
}

}  // namespace

FeatureMatrix gnn_layer_basic(const Graph& g, const FeatureMatrix& f, const GnnLayerParams& p,
                              bool deterministic_aggregation) {
    if (f.rows() != g.node_count())
        throw std::invalid_argument("gnn_layer_basic: feature rows must match node count");
    return run_layer(f, graph_adjacency(g), p, deterministic_aggregation).output;
}

FeatureMatrix gnn_layer_general(const Graph& g, const FeatureMatrix& f, const AggregateFn& aggregate,
                                const MergeFn& merge) {
    if (f.rows() != g.node_count())
        throw std::invalid_argument("gnn_layer_general: feature rows must match node count");
    FeatureMatrix out;
    for (int v = 0; v < g.node_count(); ++v) {
        std::vector<std::span<const double>> rows;
        for (int u : g.neighbors(v)) rows.push_back(f.row(u));
        std::vector<double> agg = aggregate(rows);
        std::vector<double> merged = merge(f.row(v), agg);
        if (v == 0) out = FeatureMatrix(g.node_count(), static_cast<int>(merged.size()));
        if (static_cast<int>(merged.size()) != out.cols())
            throw std::invalid_argument("gnn_layer_general: inconsistent merge width");
        for (int j = 0; j < out.cols(); ++j) out.at(v, j) = merged[j];
    }
    return out;
}

FeatureMatrix kgnn_layer(const Graph& g, int k, const FeatureMatrix& f, const GnnLayerParams& p,
                         KgnnScope scope, bool deterministic_aggregation) {
    RefineDomain d = make_kwl_domain(g, k, KwlVariant::set_split);
    if (f.rows() != static_cast<int>(d.size))
        throw std::invalid_argument("kgnn_layer: feature rows must match k-set count");
    return run_layer(f, scope_neighbors(d, scope), p, deterministic_aggregation).output;
}

namespace {

std::vector<std::vector<int>> subset_indices(const Graph& g, int k) {
    auto sets = enumerate_ksets(g, k);
    std::vector<std::vector<int>> sub(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (int drop = 0; drop < k; ++drop) {
            std::vector<int> rest;
            for (int j = 0; j < k; ++j)
                if (j != drop) rest.push_back(sets[i].members[j]);
            if (k == 2) {
                sub[i].push_back(rest[0]);
            } else {
                KSet u;
                u.members = std::move(rest);
                sub[i].push_back(static_cast<int>(kset_index(g.node_count(), u)));
            }
        }
    }
    return sub;
}

FeatureMatrix init_concat_matrix(const Graph& g, int k, const FeatureMatrix& f_prev,
                                 const std::vector<AtomicType>& iso_alphabet,
                                 const std::vector<std::vector<int>>& sub_idx,
                                 std::vector<int>* iso_index_out) {
    auto sets = enumerate_ksets(g, k);
    const int iso_w = static_cast<int>(iso_alphabet.size());
    FeatureMatrix concat(static_cast<int>(sets.size()), iso_w + f_prev.cols());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const int idx = atomic_index(iso_alphabet, atomic_type_set(g, sets[i]));
        if (iso_index_out) (*iso_index_out)[i] = idx;
        concat.at(static_cast<int>(i), idx) = 1.0;
        for (int u : sub_idx[i])
            for (int c = 0; c < f_prev.cols(); ++c)
                concat.at(static_cast<int>(i), iso_w + c) += f_prev.at(u, c);
    }
    return concat;
}

}  // namespace

FeatureMatrix hierarchical_init(const Graph& g, int k, const FeatureMatrix& f_prev,
                                const Matrix<double>& w, Activation act,
                                const std::vector<AtomicType>& iso_alphabet) {
    const int expected_prev_rows =
        k == 2 ? g.node_count() : static_cast<int>(binomial(g.node_count(), k - 1));
    if (f_prev.rows() != expected_prev_rows)
        throw std::invalid_argument("hierarchical_init: previous-level row count mismatch");
    auto sub_idx = subset_indices(g, k);
    FeatureMatrix concat = init_concat_matrix(g, k, f_prev, iso_alphabet, sub_idx, nullptr);
    if (w.rows() != concat.cols())
        throw std::invalid_argument("hierarchical_init: weight shape mismatch");
    FeatureMatrix out = concat * w;
    for (double& x : out.data()) x = apply_activation(act, x);
    return out;
}

FeatureMatrix one_hot_atomic_types(const Graph& g, int k, const std::vector<AtomicType>& alphabet) {
    auto sets = enumerate_ksets(g, k);
    FeatureMatrix f(static_cast<int>(sets.size()), static_cast<int>(alphabet.size()));
    for (std::size_t i = 0; i < sets.size(); ++i)
        f.at(static_cast<int>(i), atomic_index(alphabet, atomic_type_set(g, sets[i]))) = 1.0;
    return f;
}

std::vector<double> readout(const FeatureMatrix& f, ReadoutMode mode) {
    if (f.rows() == 0) throw std::invalid_argument("readout: empty feature matrix");
    std::vector<double> out(f.cols(), 0.0);
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c) out[c] += f.at(r, c);
    if (mode == ReadoutMode::mean)
        for (double& x : out) x /= f.rows();
    return out;
}

Prediction forward(const GnnModel& model, const Graph& g) {
    ForwardCache cache;
    cache.f0 = one_hot_labels(g, model.label_alphabet);

    const auto adj = graph_adjacency(g);
    const FeatureMatrix* cur = &cache.f0;
    for (const auto& layer : model.node_layers) {
        cache.node_layers.push_back(run_layer(*cur, adj, layer, model.deterministic_aggregation));
        cur = &cache.node_layers.back().output;
    }
    const FeatureMatrix* node_final = cur;

    cache.pooled_offsets.push_back(0);
    std::vector<double> pooled = readout(*node_final, model.readout_mode);

    const FeatureMatrix* prev = node_final;
    for (const auto& branch : model.branches) {
        BranchCache bc;
        RefineDomain domain = make_kwl_domain(g, branch.k, KwlVariant::set_split);
        bc.scope_nbrs = scope_neighbors(domain, branch.scope);
        bc.sub_idx = subset_indices(g, branch.k);
        bc.iso_index.assign(domain.size, -1);
        bc.init_concat =
            init_concat_matrix(g, branch.k, *prev, branch.iso_alphabet, bc.sub_idx, &bc.iso_index);
        if (branch.init_w.rows() != bc.init_concat.cols())
            throw std::invalid_argument("forward: hierarchy link shape mismatch");
        bc.init_preact = bc.init_concat * branch.init_w;
        bc.init_out = bc.init_preact;
        for (double& x : bc.init_out.data()) x = apply_activation(branch.init_act, x);

        const FeatureMatrix* kcur = &bc.init_out;
        for (const auto& layer : branch.layers) {
            bc.layers.push_back(run_layer(*kcur, bc.scope_nbrs, layer, model.deterministic_aggregation));
            kcur = &bc.layers.back().output;
        }
        cache.pooled_offsets.push_back(static_cast<int>(pooled.size()));
        auto r = readout(*kcur, model.readout_mode);
        pooled.insert(pooled.end(), r.begin(), r.end());

        cache.branches.push_back(std::move(bc));
        prev = cache.branches.back().layers.empty() ? &cache.branches.back().init_out
                                                    : &cache.branches.back().layers.back().output;
    }

    cache.pooled = pooled;
    std::vector<double> x = pooled;
    for (const auto& layer : model.head) {
        if (layer.w.rows() != static_cast<int>(x.size()))
            throw std::invalid_argument("forward: head shape mismatch");
        cache.head_inputs.push_back(x);
        std::vector<double> pre(layer.w.cols(), 0.0);
        for (int j = 0; j < layer.w.cols(); ++j) {
            double acc = layer.bias[j];
            for (int i = 0; i < layer.w.rows(); ++i) acc += x[i] * layer.w.at(i, j);
            pre[j] = acc;
        }
        cache.head_preact.push_back(pre);
        x.resize(pre.size());
        for (std::size_t j = 0; j < pre.size(); ++j) x[j] = apply_activation(layer.act, pre[j]);
    }
    cache.prediction = x;

    Prediction p;
    p.value = x;
    p.cache = std::move(cache);
    return p;
}

double loss_value(std::span<const double> prediction, std::span<const double> target, LossKind kind) {
    if (kind == LossKind::mse) {
        if (prediction.size() != target.size())
            throw std::invalid_argument("loss: prediction/target size mismatch");
        double acc = 0.0;
        for (std::size_t i = 0; i < prediction.size(); ++i) {
            const double d = prediction[i] - target[i];
            acc += d * d;
        }
        return acc / static_cast<double>(prediction.size());
    }
    // Binary cross-entropy on a single logit, in the stable form.
    if (prediction.size() != 1 || target.size() != 1)
        throw std::invalid_argument("loss: bce expects one logit and one 0/1 target");
    const double z = prediction[0], y = target[0];
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

namespace {

std::vector<double> loss_grad(std::span<const double> prediction, std::span<const double> target,
                              LossKind kind) {
    std::vector<double> d(prediction.size());
    if (kind == LossKind::mse) {
        for (std::size_t i = 0; i < prediction.size(); ++i)
            d[i] = 2.0 * (prediction[i] - target[i]) / static_cast<double>(prediction.size());
    } else {
        const double z = prediction[0];
        d[0] = 1.0 / (1.0 + std::exp(-z)) - target[0];
    }
    return d;
}

void check_differentiable(const GnnModel& model) {
    auto check = [](Activation a) {
        if (a == Activation::sign)
            throw std::invalid_argument("gradients: sign activation is not differentiable");
    };
    for (const auto& l : model.node_layers) check(l.act);
    for (const auto& b : model.branches) {
        check(b.init_act);
        for (const auto& l : b.layers) check(l.act);
    }
    for (const auto& l : model.head) check(l.act);
}

// d_out -> d_input, accumulating parameter gradients.
FeatureMatrix layer_backward(const LayerCache& c, const GnnLayerParams& p,
                             const std::vector<std::vector<int>>& nbrs, const FeatureMatrix& d_out,
                             GnnLayerParams& d_p) {
    FeatureMatrix d_pre = d_out;
    for (int r = 0; r < d_pre.rows(); ++r)
        for (int j = 0; j < d_pre.cols(); ++j)
            d_pre.at(r, j) *= activation_grad(p.act, c.preact.at(r, j), c.output.at(r, j));

    FeatureMatrix gw1 = transposed(c.input) * d_pre;
    FeatureMatrix gw2 = transposed(c.nbr_sum) * d_pre;
    for (int i = 0; i < gw1.rows(); ++i)
        for (int j = 0; j < gw1.cols(); ++j) {
            d_p.w1.at(i, j) += gw1.at(i, j);
            d_p.w2.at(i, j) += gw2.at(i, j);
        }
    for (int r = 0; r < d_pre.rows(); ++r)
        for (int j = 0; j < d_pre.cols(); ++j) d_p.bias[j] += d_pre.at(r, j);

    FeatureMatrix d_in = d_pre * transposed(p.w1);
    FeatureMatrix q = d_pre * transposed(p.w2);
    // The neighbor relations used here are symmetric, so scatter = gather.
    for (std::size_t v = 0; v < nbrs.size(); ++v)
        for (int u : nbrs[v])
            for (int cidx = 0; cidx < d_in.cols(); ++cidx)
                d_in.at(static_cast<int>(v), cidx) += q.at(u, cidx);
    return d_in;
}

FeatureMatrix readout_backward(std::span<const double> block, int rows, ReadoutMode mode) {
    FeatureMatrix d(rows, static_cast<int>(block.size()));
    const double s = mode == ReadoutMode::mean ? 1.0 / rows : 1.0;
    for (int r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < block.size(); ++j) d.at(r, static_cast<int>(j)) = block[j] * s;
    return d;
}

void add_into(FeatureMatrix& a, const FeatureMatrix& b) {
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) a.at(r, c) += b.at(r, c);
}

}  // namespace

GnnGradients zeros_like(const GnnModel& model) {
    GnnModel z = model;
    for (auto block : parameter_blocks(z)) std::fill(block.begin(), block.end(), 0.0);
    return z;
}

std::vector<std::span<double>> parameter_blocks(GnnModel& model) {
    std::vector<std::span<double>> blocks;
    auto push_vec = [&blocks](std::vector<double>& v) { blocks.emplace_back(v.data(), v.size()); };
    for (auto& l : model.node_layers) {
        push_vec(l.w1.data());
        push_vec(l.w2.data());
        push_vec(l.bias);
    }
    for (auto& b : model.branches) {
        push_vec(b.init_w.data());
        for (auto& l : b.layers) {
            push_vec(l.w1.data());
            push_vec(l.w2.data());
            push_vec(l.bias);
        }
    }
    for (auto& l : model.head) {
        push_vec(l.w.data());
        push_vec(l.bias);
    }
    return blocks;
}

void accumulate(GnnGradients& into, const GnnGradients& g) {
    auto a = parameter_blocks(into);
    auto b = parameter_blocks(const_cast<GnnGradients&>(g));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
}

void scale(GnnGradients& g, double s) {
    for (auto block : parameter_blocks(g))
        for (double& x : block) x *= s;
}

GradientResult gradients(const GnnModel& model, const Graph& g, std::span<const double> target) {
    check_differentiable(model);
    Prediction pred = forward(model, g);
    const ForwardCache& cache = pred.cache;

    GradientResult result;
    result.grads = zeros_like(model);
    result.loss = loss_value(pred.value, target, model.loss);

    std::vector<double> d = loss_grad(pred.value, target, model.loss);

    for (int li = static_cast<int>(model.head.size()) - 1; li >= 0; --li) {
        const MlpLayer& layer = model.head[li];
        MlpLayer& grad = result.grads.head[li];
        const auto& in = cache.head_inputs[li];
        const auto& pre = cache.head_preact[li];
        std::vector<double> d_pre(d.size());
        for (std::size_t j = 0; j < d.size(); ++j)
            d_pre[j] = d[j] * activation_grad(layer.act, pre[j], apply_activation(layer.act, pre[j]));
        for (int i = 0; i < layer.w.rows(); ++i)
            for (int j = 0; j < layer.w.cols(); ++j) grad.w.at(i, j) += in[i] * d_pre[j];
        for (std::size_t j = 0; j < d_pre.size(); ++j) grad.bias[j] += d_pre[j];
        std::vector<double> d_in(layer.w.rows(), 0.0);
        for (int i = 0; i < layer.w.rows(); ++i)
            for (int j = 0; j < layer.w.cols(); ++j) d_in[i] += layer.w.at(i, j) * d_pre[j];
        d = std::move(d_in);
    }

    // d is now the gradient on the pooled concatenation; peel blocks off in
    // reverse branch order, carrying the hierarchy contribution downwards.
    FeatureMatrix d_prev;
    bool have_d_prev = false;
    for (int bi = static_cast<int>(model.branches.size()) - 1; bi >= 0; --bi) {
        const KBranchParams& branch = model.branches[bi];
        KBranchParams& grad = result.grads.branches[bi];
        const BranchCache& bc = cache.branches[bi];
        const FeatureMatrix& final_out = bc.layers.empty() ? bc.init_out : bc.layers.back().output;

        const int off = cache.pooled_offsets[bi + 1];
        FeatureMatrix d_f = readout_backward(
            std::span<const double>(d.data() + off, static_cast<std::size_t>(final_out.cols())),
            final_out.rows(), model.readout_mode);
        if (have_d_prev) add_into(d_f, d_prev);

        for (int li = static_cast<int>(branch.layers.size()) - 1; li >= 0; --li)
            d_f = layer_backward(bc.layers[li], branch.layers[li], bc.scope_nbrs, d_f,
                                 grad.layers[li]);

        FeatureMatrix d_pre_init = d_f;
        for (int r = 0; r < d_pre_init.rows(); ++r)
            for (int j = 0; j < d_pre_init.cols(); ++j)
                d_pre_init.at(r, j) *= activation_grad(branch.init_act, bc.init_preact.at(r, j),
                                                       bc.init_out.at(r, j));
        FeatureMatrix gw = transposed(bc.init_concat) * d_pre_init;
        add_into(grad.init_w, gw);
        FeatureMatrix d_concat = d_pre_init * transposed(branch.init_w);

        const int iso_w = static_cast<int>(branch.iso_alphabet.size());
        const int prev_rows = bi == 0 ? g.node_count()
                                      : cache.branches[bi - 1].init_out.rows();
        const int prev_cols = d_concat.cols() - iso_w;
        d_prev = FeatureMatrix(prev_rows, prev_cols);
        for (int s = 0; s < d_concat.rows(); ++s)
            for (int u : bc.sub_idx[s])
                for (int c = 0; c < prev_cols; ++c) d_prev.at(u, c) += d_concat.at(s, iso_w + c);
        have_d_prev = true;
    }

    const FeatureMatrix& node_final =
        cache.node_layers.empty() ? cache.f0 : cache.node_layers.back().output;
    FeatureMatrix d_node = readout_backward(
        std::span<const double>(d.data(), static_cast<std::size_t>(node_final.cols())),
        node_final.rows(), model.readout_mode);
    if (have_d_prev) add_into(d_node, d_prev);

    const auto adj = graph_adjacency(g);
    for (int li = static_cast<int>(model.node_layers.size()) - 1; li >= 0; --li)
        d_node = layer_backward(cache.node_layers[li], model.node_layers[li], adj, d_node,
                                result.grads.node_layers[li]);

    return result;
}

void adam_step(std::vector<std::span<double>>& params, const std::vector<std::span<double>>& grads,
               AdamState& state, const TrainConfig& config) {
    std::size_t total = 0;
    for (const auto& b : params) total += b.size();
    if (state.m.empty()) {
        state.m.assign(total, 0.0);
        state.v.assign(total, 0.0);
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    std::size_t idx = 0;
    for (std::size_t b = 0; b < params.size(); ++b) {
        for (std::size_t i = 0; i < params[b].size(); ++i, ++idx) {
            const double g = grads[b][i];
            state.m[idx] = config.beta1 * state.m[idx] + (1.0 - config.beta1) * g;
            state.v[idx] = config.beta2 * state.v[idx] + (1.0 - config.beta2) * g * g;
            const double mhat = state.m[idx] / bc1;
            const double vhat = state.v[idx] / bc2;
            params[b][i] -= config.lr * mhat / (std::sqrt(vhat) + config.eps);
        }
    }
}

TrainLog train(GnnModel& model, const std::vector<Sample>& dataset, const TrainConfig& config) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    auto params = parameter_blocks(model);
    AdamState state;
    const int bs = config.batch_size <= 0 ? static_cast<int>(dataset.size()) : config.batch_size;

    TrainLog log;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < dataset.size(); start += bs) {
            const std::size_t end = std::min(dataset.size(), start + bs);
            GnnGradients acc = zeros_like(model);
            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                auto r = gradients(model, dataset[i].graph, dataset[i].target);
                accumulate(acc, r.grads);
                batch_loss += r.loss;
            }
            const double m = static_cast<double>(end - start);
            scale(acc, 1.0 / m);
            batch_loss /= m;
            if (!std::isfinite(batch_loss))
                throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch starting at " + std::to_string(start));
            auto gblocks = parameter_blocks(acc);
            adam_step(params, gblocks, state, config);
            epoch_loss += batch_loss * m;
        }
        log.epoch_loss.push_back(epoch_loss / static_cast<double>(dataset.size()));
        if (model.loss == LossKind::bce) {
            int correct = 0;
            for (const auto& sample : dataset) {
                const double z = forward(model, sample.graph).value[0];
                const double yhat = z > 0.0 ? 1.0 : 0.0;
                if (yhat == sample.target[0]) ++correct;
            }
            log.epoch_accuracy.push_back(static_cast<double>(correct) /
                                         static_cast<double>(dataset.size()));
        }
    }
    log.final_loss = log.epoch_loss.back();
    return log;
}

namespace {

Matrix<double> random_matrix(Rng& rng, int rows, int cols) {
    Matrix<double> m(rows, cols);
    const double s = 1.0 / std::sqrt(static_cast<double>(std::max(1, rows)));
    for (double& x : m.data()) x = rng.uniform(-s, s);
    return m;
}

GnnLayerParams random_layer(Rng& rng, int in_w, int out_w, Activation act) {
    GnnLayerParams p;
    p.w1 = random_matrix(rng, in_w, out_w);
    p.w2 = random_matrix(rng, in_w, out_w);
    p.bias.assign(out_w, 0.0);
    p.act = act;
    return p;
}

}  // namespace

GnnModel build_model(const ModelSpec& spec, std::span<const Graph> dataset, Rng& rng) {
    GnnModel model;
    model.readout_mode = spec.readout_mode;
    model.loss = spec.loss;

    for (const Graph& g : dataset)
        for (int v = 0; v < g.node_count(); ++v) model.label_alphabet.push_back(g.label(v));
    std::sort(model.label_alphabet.begin(), model.label_alphabet.end());
    model.label_alphabet.erase(
        std::unique(model.label_alphabet.begin(), model.label_alphabet.end()),
        model.label_alphabet.end());

    int width = static_cast<int>(model.label_alphabet.size());
    for (int i = 0; i < spec.node_layer_count; ++i) {
        model.node_layers.push_back(random_layer(rng, width, spec.hidden, spec.act));
        width = spec.hidden;
    }
    int pooled_width = width;

    for (int k : spec.ks) {
        KBranchParams branch;
        branch.k = k;
        branch.scope = spec.scope;
        branch.iso_alphabet = atomic_type_alphabet(dataset, k);
        branch.init_act = spec.act;
        const int in_w = static_cast<int>(branch.iso_alphabet.size()) + width;
        branch.init_w = random_matrix(rng, in_w, spec.hidden);
        width = spec.hidden;
        for (int i = 0; i < spec.k_layer_count; ++i)
            branch.layers.push_back(random_layer(rng, width, spec.hidden, spec.act));
        model.branches.push_back(std::move(branch));
        pooled_width += spec.hidden;
    }

    int in_w = pooled_width;
    for (int i = 0; i < spec.head_layers; ++i) {
        const bool last = i + 1 == spec.head_layers;
        MlpLayer layer;
        layer.w = random_matrix(rng, in_w, last ? spec.output_dim : spec.head_hidden);
        layer.bias.assign(last ? spec.output_dim : spec.head_hidden, 0.0);
        layer.act = last ? Activation::identity : spec.act;
        model.head.push_back(std::move(layer));
        in_w = last ? spec.output_dim : spec.head_hidden;
    }
    return model;
}

Coloring row_partition(const FeatureMatrix& f) {
    std::vector<std::vector<long long>> tokens(f.rows());
    for (int r = 0; r < f.rows(); ++r) {
        tokens[r].reserve(f.cols());
        for (int c = 0; c < f.cols(); ++c)
            tokens[r].push_back(std::bit_cast<long long>(f.at(r, c)));
    }
    return canonicalize(tokens);
}

Coloring row_partition_tolerant(const FeatureMatrix& f, double tol) {
    std::vector<int> order(f.rows());
    for (int i = 0; i < f.rows(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&f](int a, int b) { return row_less(f.row(a), f.row(b)); });
    std::vector<int> colors(f.rows(), -1);
    int next = 0;
    int rep = -1;
    for (int idx : order) {
        bool close = rep >= 0;
        if (close)
            for (int c = 0; c < f.cols(); ++c)
                if (std::abs(f.at(idx, c) - f.at(rep, c)) > tol) {
                    close = false;
                    break;
                }
        if (!close) {
            rep = idx;
            ++next;
        }
        colors[idx] = next - 1;
    }
    std::vector<long long> tokens(colors.begin(), colors.end());
    return canonicalize(tokens);
}

}  // namespace wlforge
