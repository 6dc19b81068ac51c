#include "wlforge/simulate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace wlforge {

int rational_rank(RatMatrix m) {
    int rank = 0;
    int lead = 0;
    for (int col = 0; col < m.cols() && lead < m.rows(); ++col) {
        int pivot = -1;
        for (int r = lead; r < m.rows(); ++r)
            if (sgn(m.at(r, col)) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        for (int c = 0; c < m.cols(); ++c) std::swap(m.at(lead, c), m.at(pivot, c));
        const Rational inv = 1 / m.at(lead, col);
        for (int c = col; c < m.cols(); ++c) m.at(lead, c) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == lead || sgn(m.at(r, col)) == 0) continue;
            const Rational factor = m.at(r, col);
            for (int c = col; c < m.cols(); ++c) m.at(r, c) -= factor * m.at(lead, c);
        }
        ++lead;
        ++rank;
    }
    return rank;
}

Coloring rational_row_partition(const RatMatrix& f) {
    std::vector<std::vector<Rational>> tokens(f.rows());
    for (int r = 0; r < f.rows(); ++r)
        tokens[r].assign(f.row(r).begin(), f.row(r).end());
    return canonicalize(tokens);
}

RatMatrix one_hot_rational(const std::vector<int>& labels) {
    Coloring ids = canonicalize(labels);
    RatMatrix f(ids.domain_size(), std::max(1, ids.num_colors()));
    for (int v = 0; v < ids.domain_size(); ++v) f.at(v, ids.color(v)) = 1;
    return f;
}

RatMatrix dist2lu(const Matrix<long long>& b, long long n) {
    const int s = b.rows();
    const int t = b.cols();
    if (s == 0 || t == 0) throw std::invalid_argument("dist2lu: empty matrix");
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j)
            if (b.at(i, j) < 0 || b.at(i, j) > n - 1)
                throw std::invalid_argument("dist2lu: entries must lie in 0..n-1");

    // Base-n row encoding: distinct rows give distinct non-negative values.
    const mpz_class base(static_cast<long>(n));
    std::vector<mpz_class> z(t);
    z[t - 1] = 1;
    for (int j = t - 2; j >= 0; --j) z[j] = z[j + 1] * base;
    std::vector<mpz_class> enc(s, 0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < t; ++j) enc[i] += mpz_class(static_cast<long>(b.at(i, j))) * z[j];
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j)
            if (enc[i] == enc[j]) throw std::invalid_argument("dist2lu: duplicate rows");

    std::vector<int> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&enc](int a, int c) { return enc[a] > enc[c]; });

    // Thresholds x_j with enc_i * x_j < 1 iff i >= j in descending order.
    std::vector<Rational> x(s);
    if (s == 1) {
        x[0] = 1;
    } else {
        x[0] = Rational(1) / Rational(2 * enc[order[0]]);
        for (int j = 1; j < s; ++j) x[j] = Rational(2) / Rational(enc[order[j - 1]] + enc[order[j]]);
    }

    RatMatrix out(t, s);
    for (int j = 0; j < s; ++j)
        for (int r = 0; r < t; ++r) out.at(r, order[j]) = Rational(z[r]) * x[j];
    return out;
}

namespace {

RatMatrix distinct_rows(const RatMatrix& f, const Coloring& classes) {
    RatMatrix out(classes.num_colors(), f.cols());
    std::vector<bool> seen(classes.num_colors(), false);
    for (int v = 0; v < f.rows(); ++v) {
        const int c = classes.color(v);
        if (seen[c]) continue;
        seen[c] = true;
        for (int j = 0; j < f.cols(); ++j) out.at(c, j) = f.at(v, j);
    }
    return out;
}

// Solves G Y = I exactly; throws when G is singular.
RatMatrix invert(RatMatrix g, const char* who) {
    const int m = g.rows();
    RatMatrix y = RatMatrix::identity(m);
    for (int col = 0; col < m; ++col) {
        int pivot = -1;
        for (int r = col; r < m; ++r)
            if (sgn(g.at(r, col)) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::invalid_argument(std::string(who) + ": singular system");
        for (int c = 0; c < m; ++c) {
            std::swap(g.at(col, c), g.at(pivot, c));
            std::swap(y.at(col, c), y.at(pivot, c));
        }
        const Rational inv = 1 / g.at(col, col);
        for (int c = 0; c < m; ++c) {
            g.at(col, c) *= inv;
            y.at(col, c) *= inv;
        }
        for (int r = 0; r < m; ++r) {
            if (r == col || sgn(g.at(r, col)) == 0) continue;
            const Rational factor = g.at(r, col);
            for (int c = 0; c < m; ++c) {
                g.at(r, c) -= factor * g.at(col, c);
                y.at(r, c) -= factor * y.at(col, c);
            }
        }
    }
    return y;
}

RatMatrix adjacency_times(const Graph& g, const RatMatrix& f) {
    RatMatrix out(f.rows(), f.cols());
    for (int v = 0; v < g.node_count(); ++v)
        for (int u : g.neighbors(v))
            for (int c = 0; c < f.cols(); ++c) out.at(v, c) += f.at(u, c);
    return out;
}

}  // namespace

UncoloredStep simulate_step_uncolored(const Graph& g, const RatMatrix& f) {
    const int n = g.node_count();
    if (n == 0) throw std::invalid_argument("simulate_step_uncolored: empty graph");
    if (f.rows() != n)
        throw std::invalid_argument("simulate_step_uncolored: feature rows must match node count");

    const Coloring classes = rational_row_partition(f);
    const int r = classes.num_colors();
    RatMatrix ftilde = distinct_rows(f, classes);

    // Right inverse via the Gram system; singularity means the distinct rows
    // are linearly dependent, which the construction cannot recover from.
    RatMatrix gram = ftilde * transposed(ftilde);
    RatMatrix y = invert(std::move(gram),
                         "simulate_step_uncolored: distinct rows linearly dependent");
    RatMatrix m = transposed(ftilde) * y;

    // F M must be the exact 0/1 class indicator.
    RatMatrix indicator = f * m;
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < r; ++j) {
            const Rational expected = classes.color(v) == j ? 1 : 0;
            if (indicator.at(v, j) != expected)
                throw std::logic_error("simulate_step_uncolored: class indicator check failed");
        }

    // Neighbor counts per class; entries lie in 0..n-1.
    RatMatrix counts = adjacency_times(g, indicator);
    Matrix<long long> counts_ll(n, r);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < r; ++j) {
            const Rational& c = counts.at(v, j);
            if (c.get_den() != 1)
                throw std::logic_error("simulate_step_uncolored: non-integer neighbor count");
            counts_ll.at(v, j) = static_cast<long long>(c.get_num().get_si());
        }

    const Coloring count_classes = rational_row_partition(counts);
    const int s = count_classes.num_colors();
    Matrix<long long> dtilde(s, r);
    {
        std::vector<bool> seen(s, false);
        for (int v = 0; v < n; ++v) {
            const int c = count_classes.color(v);
            if (seen[c]) continue;
            seen[c] = true;
            for (int j = 0; j < r; ++j) dtilde.at(c, j) = counts_ll.at(v, j);
        }
    }

    RatMatrix x = dist2lu(dtilde, n);

    UncoloredStep step;
    RatMatrix w_core = m * x;  // d x s
    step.w = RatMatrix(f.cols(), n);
    for (int i = 0; i < f.cols(); ++i)
        for (int j = 0; j < s; ++j) step.w.at(i, j) = w_core.at(i, j);

    RatMatrix c_core = counts * x;  // n x s
    step.pre = RatMatrix(n, n);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < s; ++j) step.pre.at(v, j) = c_core.at(v, j);

    step.f_next = RatMatrix(n, n);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < n; ++j)
            step.f_next.at(v, j) = sgn(step.pre.at(v, j) - 1) > 0 ? 1 : -1;
    return step;
}

ColoredSimulation simulate_wl_colored(const Graph& g, const std::vector<int>& labels, int T) {
    const int n = g.node_count();
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("simulate_wl_colored: labels must have n entries");
    if (T < 0 || T > n)
        throw std::invalid_argument("simulate_wl_colored: requires 0 <= T <= n");

    ColoredSimulation sim;
    sim.f0 = one_hot_rational(labels);
    sim.traces.push_back(sim.f0);
    RatMatrix f = sim.f0;
    for (int t = 1; t <= T; ++t) {
        UncoloredStep step = simulate_step_uncolored(g, f);
        f = hconcat(sim.f0, step.f_next);
        sim.per_step_w.push_back(std::move(step.w));
        sim.traces.push_back(f);
    }
    return sim;
}

ReluSimulation relu_simulation(const Graph& g, const std::vector<int>& labels, int T) {
    const int n = g.node_count();
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("relu_simulation: labels must have n entries");
    if (T < 0 || T > n) throw std::invalid_argument("relu_simulation: requires 0 <= T <= n");

    ReluSimulation sim;
    sim.f0 = one_hot_rational(labels);
    sim.traces.push_back(sim.f0);

    const int label_width = sim.f0.cols();
    RatMatrix f_signed = sim.f0;
    for (int t = 1; t <= T; ++t) {
        UncoloredStep step = simulate_step_uncolored(g, f_signed);

        // First ReLU layer: relu(J - A F W). The shifted even-layer input
        // [F0 | S + J] feeds the same product once the rank-one correction
        // (deg(v) times the column sums of the sign-block rows of W) is folded
        // into the linear part; f0's unit row sums make deg(v) linearly
        // readable, so no per-column bias is needed.
        RatMatrix layer_w = step.w;
        if (t > 1) {
            std::vector<Rational> col_sums(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                Rational acc = 0;
                for (int i = label_width; i < step.w.rows(); ++i) acc += step.w.at(i, j);
                col_sums[j] = acc;
            }
            for (int i = 0; i < label_width; ++i)
                for (int j = 0; j < n; ++j) layer_w.at(i, j) -= col_sums[j];
        }
        for (auto& v : layer_w.data()) v = -v;

        RatMatrix c1(n, n);
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < n; ++j) {
                Rational e = 1 - step.pre.at(v, j);
                c1.at(v, j) = sgn(e) > 0 ? e : Rational(0);
            }

        Rational delta;
        bool have_delta = false;
        for (const Rational& e : c1.data())
            if (sgn(e) > 0 && (!have_delta || e < delta)) {
                delta = e;
                have_delta = true;
            }
        if (!have_delta) throw std::logic_error("relu_simulation: no positive entry for delta");

        RatMatrix b_out(n, n);
        const Rational scale = Rational(-2) / delta;
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < n; ++j) {
                Rational e = scale * c1.at(v, j) + 2;
                b_out.at(v, j) = sgn(e) > 0 ? e : Rational(0);
            }

        sim.traces.push_back(c1);
        sim.traces.push_back(hconcat(sim.f0, b_out));
        sim.rounds.push_back({std::move(layer_w), delta});

        f_signed = hconcat(sim.f0, step.f_next);
    }
    return sim;
}

}  // namespace wlforge
