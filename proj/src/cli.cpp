#include "wlforge/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "wlforge/gnn.hpp"
#include "wlforge/higher_order.hpp"
#include "wlforge/io.hpp"
#include "wlforge/kernels.hpp"
#include "wlforge/refinement.hpp"
#include "wlforge/simulate.hpp"
#include "wlforge/verify.hpp"

namespace wlforge {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json rational_json(const Rational& r) {
    return json::array({r.get_num().get_str(), r.get_den().get_str()});
}

json rational_matrix_json(const RatMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(rational_json(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return json::object({{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}});
}

json matrix_json(const Matrix<double>& m) {
    json data = json::array();
    for (double v : m.data()) data.push_back(v);
    return json::object({{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}});
}

void write_json(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_config(const std::string& out_dir, const json& config) {
    write_json(out_dir + "/config.json", config);
}

RefinerConfig refiner_from_flags(const std::string& refiner, int k, const std::string& variant) {
    RefinerConfig config;
    if (refiner == "wl1") {
        config.kind = RefinerConfig::Kind::wl1;
    } else if (refiner == "kwl") {
        config.kind = RefinerConfig::Kind::kwl;
        config.k = k;
        config.variant = kwl_variant_from_string(variant);
    } else {
        throw CLI::ValidationError("--refiner must be wl1 or kwl");
    }
    return config;
}

json refiner_json(const RefinerConfig& c) {
    json j;
    j["kind"] = c.kind == RefinerConfig::Kind::wl1 ? "wl1" : "kwl";
    if (c.kind == RefinerConfig::Kind::kwl) {
        j["k"] = c.k;
        j["variant"] = to_string(c.variant);
    }
    return j;
}

std::string dataset_name_for(const std::string& dir, const std::string& name_flag) {
    if (!name_flag.empty()) return name_flag;
    return std::filesystem::path(dir).filename().string();
}

struct CommandContext {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

int cmd_color(const std::string& input, const RefinerConfig& refiner, int iters,
              const CommandContext& ctx) {
    const Graph g = load_edge_list(input);

    json config = {{"command", "color"},     {"input", input},
                   {"refiner", refiner_json(refiner)}, {"iters", iters},
                   {"seed", ctx.seed},       {"out_dir", ctx.out_dir}};

    RefineDomain domain = make_refine_domain(g, refiner);
    LockstepTrace trace = lockstep_refine(
        std::span<const RefineDomain>(&domain, 1),
        iters < 0 ? std::nullopt : std::optional<int>(iters));

    std::ostringstream csv;
    csv << "# config " << config.dump() << "\n";
    csv << "iteration,element,color\n";
    for (std::size_t t = 0; t < trace.ids.size(); ++t)
        for (std::size_t e = 0; e < trace.ids[t][0].size(); ++e)
            csv << t << ',' << e << ',' << trace.ids[t][0][e] << "\n";
    write_text_file(ctx.out_dir + "/colors.csv", csv.str());

    json iterations = json::array();
    for (std::size_t t = 0; t < trace.ids.size(); ++t) {
        std::vector<long long> counts(trace.total_colors[t], 0);
        for (int id : trace.ids[t][0]) ++counts[id];
        json hist = json::array();
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] > 0) hist.push_back(json::array({c, counts[c]}));
        iterations.push_back(
            {{"iteration", t}, {"colors", trace.total_colors[t]}, {"histogram", std::move(hist)}});
    }
    json out = {{"config", config}, {"iterations", std::move(iterations)}};
    if (trace.converged_at) out["converged_at"] = *trace.converged_at;
    write_json(ctx.out_dir + "/histogram.json", out);
    write_config(ctx.out_dir, config);

    std::cout << "colors written to " << ctx.out_dir << "/colors.csv ("
              << trace.ids.size() - 1 << " iterations)\n";
    return 0;
}

int cmd_distinguish(const std::string& a, const std::string& b, const RefinerConfig& refiner,
                    const CommandContext& ctx) {
    const Graph g1 = load_edge_list(a);
    const Graph g2 = load_edge_list(b);

    json config = {{"command", "distinguish"}, {"a", a}, {"b", b},
                   {"refiner", refiner_json(refiner)}, {"seed", ctx.seed},
                   {"out_dir", ctx.out_dir}};

    DistinguishResult result = distinguish(g1, g2, refiner);
    json out = {{"config", config},
                {"distinguished", result.distinguished},
                {"iterations_run", result.iterations_run}};
    if (result.iteration) out["first_separating_iteration"] = *result.iteration;
    write_json(ctx.out_dir + "/result.json", out);
    write_config(ctx.out_dir, config);

    if (result.distinguished)
        std::cout << "distinguished at iteration " << *result.iteration << "\n";
    else
        std::cout << "not distinguished\n";
    return 0;
}

int cmd_kernel(const std::string& dir, const std::string& name_flag, int iters, bool normalize,
               const CommandContext& ctx) {
    const std::string name = dataset_name_for(dir, name_flag);
    Dataset ds = load_tudataset(dir, name);
    if (ds.graphs.empty()) throw FormatError(dir + ": dataset has no graphs");

    json config = {{"command", "kernel"}, {"dataset", dir},        {"name", name},
                   {"iters", iters},      {"normalize", normalize}, {"seed", ctx.seed},
                   {"out_dir", ctx.out_dir}};

    RefinerConfig refiner;  // WL subtree kernel runs on color refinement
    auto features = wl_feature_vectors(ds.graphs, refiner, iters);
    GramMatrix gram = gram_matrix(ds.graphs, refiner, iters, normalize);

    std::ostringstream csv;
    csv << "# config " << config.dump() << "\n";
    for (int i = 0; i < gram.m; ++i) {
        csv << (i ? "," : "") << gram.graph_ids[i];
    }
    csv << "\n";
    for (int i = 0; i < gram.m; ++i) {
        for (int j = 0; j < gram.m; ++j) csv << (j ? "," : "") << format_double(gram.at(i, j));
        csv << "\n";
    }
    write_text_file(ctx.out_dir + "/gram.csv", csv.str());

    json fj = json::array();
    for (std::size_t i = 0; i < features.size(); ++i) {
        json entries = json::array();
        for (const auto& [key, count] : features[i].entries)
            entries.push_back(json::array({key.first, key.second, count}));
        fj.push_back({{"graph", gram.graph_ids[i]}, {"features", std::move(entries)}});
    }
    write_json(ctx.out_dir + "/features.json", json{{"config", config}, {"vectors", fj}});
    write_config(ctx.out_dir, config);

    std::cout << "gram matrix " << gram.m << "x" << gram.m << " written to " << ctx.out_dir
              << "/gram.csv\n";
    return 0;
}

int cmd_product(const std::string& input, int k, const CommandContext& ctx) {
    const Graph g = load_edge_list(input);
    json config = {{"command", "product"}, {"input", input}, {"k", k},
                   {"seed", ctx.seed},     {"out_dir", ctx.out_dir}};
    const Graph prod = product_graph(g, k);
    write_edge_list(ctx.out_dir + "/product.graph", prod);
    write_config(ctx.out_dir, config);
    std::cout << "product graph: " << prod.node_count() << " nodes, " << prod.edge_count()
              << " edges\n";
    return 0;
}

int cmd_simulate(const std::string& input, int iters, const std::string& activation,
                 const CommandContext& ctx) {
    const Graph g = load_edge_list(input);
    if (activation != "sign" && activation != "relu")
        throw CLI::ValidationError("--activation must be sign or relu");
    const int T = iters < 0 ? g.node_count() : std::min(iters, g.node_count());

    json config = {{"command", "simulate"}, {"input", input},   {"iters", T},
                   {"activation", activation}, {"seed", ctx.seed}, {"out_dir", ctx.out_dir}};

    RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), T);
    json verdicts = json::array();
    bool all_equivalent = true;
    json weights;

    if (activation == "sign") {
        ColoredSimulation sim = simulate_wl_colored(g, g.labels(), T);
        for (int t = 0; t <= T; ++t) {
            const bool eq = equivalent(rational_row_partition(sim.traces[t]), wl.at_clamped(t));
            all_equivalent = all_equivalent && eq;
            verdicts.push_back({{"t", t},
                                {"equivalent", eq},
                                {"classes", rational_row_partition(sim.traces[t]).num_colors()}});
        }
        json steps = json::array();
        for (const auto& w : sim.per_step_w) steps.push_back(rational_matrix_json(w));
        weights = {{"activation", "sign"},
                   {"bias", -1},
                   {"f0", rational_matrix_json(sim.f0)},
                   {"steps", std::move(steps)}};
    } else {
        ReluSimulation sim = relu_simulation(g, g.labels(), T);
        for (int t = 0; t <= T; ++t) {
            const bool eq =
                equivalent(rational_row_partition(sim.traces[2 * t]), wl.at_clamped(t));
            all_equivalent = all_equivalent && eq;
            verdicts.push_back(
                {{"t", t},
                 {"equivalent", eq},
                 {"classes", rational_row_partition(sim.traces[2 * t]).num_colors()}});
        }
        json rounds = json::array();
        for (const auto& round : sim.rounds)
            rounds.push_back({{"layer_a_w2", rational_matrix_json(round.layer_a_w2)},
                              {"layer_a_bias", 1},
                              {"delta", rational_json(round.delta)},
                              {"layer_b_bias", 2}});
        weights = {{"activation", "relu"},
                   {"f0", rational_matrix_json(sim.f0)},
                   {"rounds", std::move(rounds)}};
    }

    write_json(ctx.out_dir + "/report.json",
               json{{"config", config},
                    {"all_equivalent", all_equivalent},
                    {"iterations", std::move(verdicts)}});
    write_json(ctx.out_dir + "/weights.json", json{{"config", config}, {"weights", weights}});
    write_config(ctx.out_dir, config);

    std::cout << (all_equivalent ? "equivalent at all t\n" : "equivalence FAILED\n");
    return all_equivalent ? 0 : 3;
}

json model_json(const GnnModel& model);

int cmd_gnn(const std::string& dir, const std::string& name_flag, const std::string& arch,
            int epochs, const std::string& task, const CommandContext& ctx) {
    const std::string name = dataset_name_for(dir, name_flag);
    Dataset ds = load_tudataset(dir, name);
    if (!ds.graph_targets)
        throw FormatError(dir + ": dataset has no graph labels/targets for training");

    json config = {{"command", "gnn"}, {"dataset", dir}, {"name", name}, {"arch", arch},
                   {"epochs", epochs}, {"task", task},   {"seed", ctx.seed},
                   {"out_dir", ctx.out_dir}};

    ModelSpec spec;
    if (arch == "1")
        spec.ks = {};
    else if (arch == "1-2")
        spec.ks = {2};
    else if (arch == "1-2-3")
        spec.ks = {2, 3};
    else
        throw CLI::ValidationError("--arch must be one of 1, 1-2, 1-2-3");
    spec.loss = task == "regress" ? LossKind::mse : LossKind::bce;

    std::vector<Sample> samples;
    const auto& targets = *ds.graph_targets;
    std::vector<double> classes = targets;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (task == "classify" && classes.size() != 2)
        throw FormatError(dir + ": classify expects exactly two distinct graph labels");
    for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
        Sample s;
        s.graph = ds.graphs[i];
        s.target = {task == "classify" ? (targets[i] == classes[1] ? 1.0 : 0.0) : targets[i]};
        samples.push_back(std::move(s));
    }

    Rng rng(ctx.seed);
    GnnModel model = build_model(spec, ds.graphs, rng);
    TrainConfig tc;
    tc.epochs = epochs;
    tc.seed = ctx.seed;
    TrainLog log = train(model, samples, tc);

    std::ostringstream csv;
    csv << "# config " << config.dump() << "\n";
    csv << "epoch,loss" << (log.epoch_accuracy.empty() ? "" : ",accuracy") << "\n";
    for (std::size_t e = 0; e < log.epoch_loss.size(); ++e) {
        csv << (e + 1) << ',' << format_double(log.epoch_loss[e]);
        if (!log.epoch_accuracy.empty()) csv << ',' << format_double(log.epoch_accuracy[e]);
        csv << "\n";
    }
    write_text_file(ctx.out_dir + "/loss.csv", csv.str());
    write_json(ctx.out_dir + "/model.json", json{{"config", config}, {"model", model_json(model)}});
    write_config(ctx.out_dir, config);

    std::cout << "final loss " << format_double(log.final_loss);
    if (!log.epoch_accuracy.empty())
        std::cout << ", final accuracy " << format_double(log.epoch_accuracy.back());
    std::cout << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, int trials, const CommandContext& ctx) {
    json config = {{"command", "verify"}, {"suite", suite}, {"trials", trials},
                   {"seed", ctx.seed},    {"out_dir", ctx.out_dir}};
    auto reports = run_suite(suite, ctx.seed, trials);
    bool all_ok = true;
    json rj = json::array();
    for (const auto& r : reports) {
        std::cout << r.summary() << "\n";
        all_ok = all_ok && r.ok();
        json failures = json::array();
        for (const auto& f : r.failures) failures.push_back(f);
        rj.push_back({{"suite", r.name},
                      {"trials", r.trials},
                      {"passed", r.passed},
                      {"failures", std::move(failures)}});
    }
    write_json(ctx.out_dir + "/report.json",
               json{{"config", config}, {"ok", all_ok}, {"suites", std::move(rj)}});
    write_config(ctx.out_dir, config);
    return all_ok ? 0 : 3;
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::sign: return "sign";
    }
    return "?";
}

json layer_json(const GnnLayerParams& l) {
    return {{"w1", matrix_json(l.w1)},
            {"w2", matrix_json(l.w2)},
            {"bias", l.bias},
            {"activation", activation_name(l.act)}};
}

json model_json(const GnnModel& model) {
    json j;
    j["label_alphabet"] = model.label_alphabet;
    j["readout"] = model.readout_mode == ReadoutMode::sum ? "sum" : "mean";
    j["loss"] = model.loss == LossKind::mse ? "mse" : "bce";
    json node_layers = json::array();
    for (const auto& l : model.node_layers) node_layers.push_back(layer_json(l));
    j["node_layers"] = std::move(node_layers);
    json branches = json::array();
    for (const auto& b : model.branches) {
        json iso = json::array();
        for (const auto& t : b.iso_alphabet) iso.push_back(t.code);
        json layers = json::array();
        for (const auto& l : b.layers) layers.push_back(layer_json(l));
        branches.push_back({{"k", b.k},
                            {"scope", b.scope == KgnnScope::full ? "full" : "local"},
                            {"iso_alphabet", std::move(iso)},
                            {"init_w", matrix_json(b.init_w)},
                            {"init_activation", activation_name(b.init_act)},
                            {"layers", std::move(layers)}});
    }
    j["branches"] = std::move(branches);
    json head = json::array();
    for (const auto& l : model.head)
        head.push_back({{"w", matrix_json(l.w)},
                        {"bias", l.bias},
                        {"activation", activation_name(l.act)}});
    j["head"] = std::move(head);
    return j;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Weisfeiler-Leman refinement, kernels, dense k-GNNs and the constructive "
                 "equivalence checks"};
    app.name("wlforge");
    app.require_subcommand(1);

    CommandContext ctx;
    app.add_option("--out-dir", ctx.out_dir, "Directory for artifacts")->capture_default_str();
    app.add_option("--seed", ctx.seed, "RNG seed")->capture_default_str();

    std::string input, input_b, refiner = "wl1", variant = "set-split", dataset_dir, name_flag;
    std::string activation = "sign", arch = "1", task = "classify", suite = "thm1";
    int k = 2, iters = -1, epochs = 100, trials = 200;
    bool normalize = false;

    auto add_refiner_flags = [&](CLI::App* cmd) {
        cmd->add_option("--refiner", refiner, "wl1 or kwl")->capture_default_str();
        cmd->add_option("--k", k, "dimension for kwl")->capture_default_str();
        cmd->add_option("--variant", variant, "tuple, set-combined, set-split, set-local")
            ->capture_default_str();
    };

    CLI::App* color = app.add_subcommand("color", "Refine one graph and dump colors");
    color->add_option("--input", input, "Edge-list file")->required();
    add_refiner_flags(color);
    color->add_option("--iters", iters, "Iteration count (-1: until convergence)")
        ->capture_default_str();

    CLI::App* dist = app.add_subcommand("distinguish", "Parallel refinement of two graphs");
    dist->add_option("--a", input, "First edge-list file")->required();
    dist->add_option("--b", input_b, "Second edge-list file")->required();
    add_refiner_flags(dist);

    CLI::App* kernel = app.add_subcommand("kernel", "WL subtree kernel Gram matrix");
    kernel->add_option("--dataset", dataset_dir, "TUDataset directory")->required();
    kernel->add_option("--name", name_flag, "Dataset name (default: directory name)");
    kernel->add_option("--iters", iters, "Refinement rounds")->required();
    kernel->add_flag("--normalize", normalize, "Unit-diagonal normalization");

    CLI::App* product = app.add_subcommand("product", "k-set product graph with atomic types");
    product->add_option("--input", input, "Edge-list file")->required();
    product->add_option("--k", k, "Set size")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "Constructive refinement simulation");
    simulate->add_option("--input", input, "Edge-list file")->required();
    simulate->add_option("--iters", iters, "Rounds (default: node count)")->capture_default_str();
    simulate->add_option("--activation", activation, "sign or relu")->capture_default_str();

    CLI::App* gnn = app.add_subcommand("gnn", "Train a (hierarchical) GNN on a dataset");
    gnn->add_option("--dataset", dataset_dir, "TUDataset directory")->required();
    gnn->add_option("--name", name_flag, "Dataset name (default: directory name)");
    gnn->add_option("--arch", arch, "1, 1-2 or 1-2-3")->capture_default_str();
    gnn->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    gnn->add_option("--task", task, "classify or regress")->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "Property suites");
    verify->add_option("--suite", suite, "thm1, prop3, prop4 or appendix")->required();
    verify->add_option("--trials", trials, "Trials per suite")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        std::filesystem::create_directories(ctx.out_dir);
        if (color->parsed())
            return cmd_color(input, refiner_from_flags(refiner, k, variant), iters, ctx);
        if (dist->parsed())
            return cmd_distinguish(input, input_b, refiner_from_flags(refiner, k, variant), ctx);
        if (kernel->parsed()) return cmd_kernel(dataset_dir, name_flag, iters, normalize, ctx);
        if (product->parsed()) return cmd_product(input, k, ctx);
        if (simulate->parsed()) return cmd_simulate(input, iters, activation, ctx);
        if (gnn->parsed()) return cmd_gnn(dataset_dir, name_flag, arch, epochs, task, ctx);
        if (verify->parsed()) return cmd_verify(suite, trials, ctx);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace wlforge
