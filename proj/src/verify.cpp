#include "wlforge/verify.hpp"

#include <chrono>
#include <sstream>

#include "wlforge/higher_order.hpp"
#include "wlforge/refinement.hpp"
#include "wlforge/simulate.hpp"

namespace wlforge {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void record(SuiteReport& report, bool ok, const std::string& message) {
    ++report.trials;
    if (ok) {
        ++report.passed;
    } else if (report.failures.size() < 8) {
        report.failures.push_back(message);
    }
}

std::vector<int> sorted_unique_labels(const Graph& g) {
    std::vector<int> labels = g.labels();
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

GnnLayerParams random_float_layer(Rng& rng, int in_w, int out_w, Activation act) {
    GnnLayerParams p;
    p.w1 = Matrix<double>(in_w, out_w);
    p.w2 = Matrix<double>(in_w, out_w);
    for (double& x : p.w1.data()) x = rng.uniform(-1.0, 1.0);
    for (double& x : p.w2.data()) x = rng.uniform(-1.0, 1.0);
    p.bias.resize(out_w);
    for (double& x : p.bias) x = rng.uniform(-1.0, 1.0);
    p.act = act;
    return p;
}

}  // namespace

std::string SuiteReport::summary() const {
    std::ostringstream ss;
    ss << name << ": " << passed << "/" << trials << (ok() ? " passed" : " FAILED");
    ss << " (" << seconds << " s)";
    for (const auto& f : failures) ss << "\n  failure: " << f;
    return ss.str();
}

Graph corpus_graph(Rng& rng) {
    const int n = rng.uniform_int(4, 12);
    const double p = rng.bernoulli(0.5) ? 0.3 : 0.5;
    const int alphabet = rng.uniform_int(1, 3);
    return random_graph(rng, n, p, alphabet);
}

SuiteReport verify_thm1(std::uint64_t seed, int trials) {
    Stopwatch watch;
    SuiteReport report;
    report.name = "thm1";
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const Graph g = corpus_graph(rng);
        const Activation act = rng.bernoulli(0.5) ? Activation::sigmoid : Activation::relu;

        RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), 3);
        FeatureMatrix f = one_hot_labels(g, sorted_unique_labels(g));
        bool ok = true;
        std::string msg;
        for (int t = 1; t <= 3; ++t) {
            const int out_w = rng.uniform_int(2, 6);
            f = gnn_layer_basic(g, f, random_float_layer(rng, f.cols(), out_w, act), true);
            if (!refines(wl.at_clamped(t), row_partition(f))) {
                ok = false;
                msg = "trial " + std::to_string(trial) + ": refinement fails at t=" +
                      std::to_string(t);
                break;
            }
        }
        record(report, ok, msg);
    }
    report.seconds = watch.seconds();
    return report;
}

SuiteReport verify_thm2(std::uint64_t seed, int trials) {
    Stopwatch watch;
    SuiteReport report;
    report.name = "thm2";
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const Graph g = corpus_graph(rng);
        const int T = g.node_count();
        bool ok = true;
        std::string msg;
        try {
            ColoredSimulation sim = simulate_wl_colored(g, g.labels(), T);
            RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), T);
            for (int t = 0; t <= T; ++t) {
                if (!equivalent(rational_row_partition(sim.traces[t]), wl.at_clamped(t))) {
                    ok = false;
                    msg = "trial " + std::to_string(trial) + ": partition differs at t=" +
                          std::to_string(t);
                    break;
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            msg = "trial " + std::to_string(trial) + ": " + e.what();
        }
        record(report, ok, msg);
    }
    report.seconds = watch.seconds();
    return report;
}

SuiteReport verify_relu(std::uint64_t seed, int trials) {
    Stopwatch watch;
    SuiteReport report;
    report.name = "relu";
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const Graph g = corpus_graph(rng);
        const int T = g.node_count();
        bool ok = true;
        std::string msg;
        try {
            ReluSimulation sim = relu_simulation(g, g.labels(), T);
            RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), T);
            if (static_cast<int>(sim.traces.size()) != 2 * T + 1)
                throw std::logic_error("layer count is not 2T");
            for (const auto& round : sim.rounds)
                if (sgn(round.delta) <= 0) throw std::logic_error("delta not positive");
            for (int t = 0; t <= T; ++t) {
                if (!equivalent(rational_row_partition(sim.traces[2 * t]), wl.at_clamped(t))) {
                    ok = false;
                    msg = "trial " + std::to_string(trial) + ": partition differs at t=" +
                          std::to_string(t);
                    break;
                }
            }
        } catch (const std::exception& e) {
            ok = false;
            msg = "trial " + std::to_string(trial) + ": " + e.what();
        }
        record(report, ok, msg);
    }
    report.seconds = watch.seconds();
    return report;
}

SuiteReport verify_prop3(std::uint64_t seed, int trials) {
    Stopwatch watch;
    SuiteReport report;
    report.name = "prop3";
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const int n = rng.uniform_int(4, 10);
        const double p = rng.bernoulli(0.5) ? 0.3 : 0.5;
        const int alphabet = rng.uniform_int(1, 3);
        const Graph g = random_graph(rng, n, p, alphabet);
        const Activation act = rng.bernoulli(0.5) ? Activation::sigmoid : Activation::relu;

        RefinementTrace kwl = kwl_run(g, 2, KwlVariant::set_split, 2);
        FeatureMatrix f = one_hot_atomic_types(
            g, 2, atomic_type_alphabet(std::span<const Graph>(&g, 1), 2));
        bool ok = true;
        std::string msg;
        for (int t = 1; t <= 2; ++t) {
            const int out_w = rng.uniform_int(2, 6);
            f = kgnn_layer(g, 2, f, random_float_layer(rng, f.cols(), out_w, act),
                           KgnnScope::full, true);
            if (!refines(kwl.at_clamped(t), row_partition(f))) {
                ok = false;
                msg = "trial " + std::to_string(trial) + ": refinement fails at t=" +
                      std::to_string(t);
                break;
            }
        }
        record(report, ok, msg);
    }
    report.seconds = watch.seconds();
    return report;
}

SuiteReport verify_prop4(std::uint64_t seed, int trials) {
    Stopwatch watch;
    SuiteReport report;
    report.name = "prop4";
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const int n = rng.uniform_int(4, 8);
        const double p = rng.bernoulli(0.5) ? 0.3 : 0.5;
        const int alphabet = rng.uniform_int(1, 3);
        const Graph g = random_graph(rng, n, p, alphabet);
        const int k = rng.uniform_int(2, 3);

        RefinementTrace kwl = kwl_run(g, k, KwlVariant::set_combined);
        const Graph prod = product_graph(g, k);
        RefinementTrace wl = wl1_run(prod, coloring_from_labels(prod.labels()),
                                     prod.node_count());

        bool ok = kwl.per_iteration.size() == wl.per_iteration.size() &&
                  kwl.converged_at == wl.converged_at;
        for (std::size_t t = 0; ok && t < kwl.per_iteration.size(); ++t)
            if (!(kwl.per_iteration[t] == wl.per_iteration[t])) ok = false;
        record(report, ok,
               ok ? "" : "trial " + std::to_string(trial) + ": traces differ (k=" +
                             std::to_string(k) + ")");
    }
    report.seconds = watch.seconds();
    return report;
}

SuiteReport verify_dist2lu(std::uint64_t seed, int trials) {
    Stopwatch watch;
    SuiteReport report;
    report.name = "dist2lu";
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const int s = rng.uniform_int(1, 8);
        const int t = rng.uniform_int(1, 8);
        const long long n = rng.uniform_int(2, 9);
        Matrix<long long> b;
        while (true) {
            b = Matrix<long long>(s, t);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < t; ++j)
                    b.at(i, j) = rng.uniform_int(0, static_cast<int>(n) - 1);
            bool distinct = true;
            for (int i = 0; i < s && distinct; ++i)
                for (int j = i + 1; j < s && distinct; ++j) {
                    bool equal = true;
                    for (int c = 0; c < t; ++c)
                        if (b.at(i, c) != b.at(j, c)) {
                            equal = false;
                            break;
                        }
                    if (equal) distinct = false;
                }
            if (distinct) break;
        }

        bool ok = true;
        std::string msg;
        try {
            RatMatrix x = dist2lu(b, n);
            RatMatrix brat(s, t);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < t; ++j) brat.at(i, j) = b.at(i, j);
            RatMatrix c = brat * x;
            RatMatrix signs(s, s);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) signs.at(i, j) = sgn(c.at(i, j) - 1) > 0 ? 1 : -1;
            if (rational_rank(signs) != s) {
                ok = false;
                msg = "trial " + std::to_string(trial) + ": sign matrix is rank-deficient";
            }
        } catch (const std::exception& e) {
            ok = false;
            msg = "trial " + std::to_string(trial) + ": " + e.what();
        }
        record(report, ok, msg);
    }
    report.seconds = watch.seconds();
    return report;
}

std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t seed, int trials) {
    if (name == "thm1") return {verify_thm1(seed, trials)};
    if (name == "prop3") return {verify_prop3(seed, trials)};
    if (name == "prop4") return {verify_prop4(seed, trials)};
    if (name == "appendix")
        return {verify_thm2(seed, trials), verify_relu(seed, trials),
                verify_dist2lu(seed, trials)};
    throw std::invalid_argument("unknown verify suite: " + name);
}

std::vector<Sample> toy_dataset(std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<Sample> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        const int n = rng.uniform_int(4, 10);
        const double p = rng.bernoulli(0.5) ? 0.3 : 0.5;
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) edges.emplace_back(u, v);
        std::vector<int> labels(n);
        int count_a = 0;
        for (int v = 0; v < n; ++v) {
            labels[v] = rng.bernoulli(0.3) ? 1 : 0;
            count_a += labels[v];
        }
        Sample s;
        s.graph = Graph(n, std::move(edges), std::move(labels));
        s.target = {count_a >= 3 ? 1.0 : 0.0};
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace wlforge
