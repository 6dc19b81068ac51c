#include <doctest.h>

#include "fixtures.hpp"
#include "wlforge/refinement.hpp"
#include "wlforge/rng.hpp"
#include "wlforge/simulate.hpp"

using namespace wlforge;

namespace {

RatMatrix ones(int rows, int cols) { return RatMatrix(rows, cols, Rational(1)); }

RatMatrix sign_of(const RatMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out.at(r, c) = sgn(m.at(r, c)) > 0 ? 1 : -1;
    return out;
}

RatMatrix adjacency_matrix(const Graph& g) {
    RatMatrix a(g.node_count(), g.node_count());
    for (auto [u, v] : g.edges()) {
        a.at(u, v) = 1;
        a.at(v, u) = 1;
    }
    return a;
}

}  // namespace

TEST_CASE("dist2lu frozen example") {
    // B = [[1],[0]], n = 2: b = (1,0), x = (1/2, 2),
    // sgn(BX - J) = [[-1, 1], [-1, -1]], nonsingular.
    Matrix<long long> b(2, 1);
    b.at(0, 0) = 1;
    b.at(1, 0) = 0;
    const RatMatrix x = dist2lu(b, 2);
    REQUIRE(x.rows() == 1);
    REQUIRE(x.cols() == 2);
    CHECK(x.at(0, 0) == Rational(1, 2));
    CHECK(x.at(0, 1) == Rational(2));

    RatMatrix brat(2, 1);
    brat.at(0, 0) = 1;
    brat.at(1, 0) = 0;
    const RatMatrix signs = sign_of(brat * x + RatMatrix(2, 2, Rational(-1)));
    CHECK(signs.at(0, 0) == Rational(-1));
    CHECK(signs.at(0, 1) == Rational(1));
    CHECK(signs.at(1, 0) == Rational(-1));
    CHECK(signs.at(1, 1) == Rational(-1));
    CHECK(rational_rank(signs) == 2);
}

TEST_CASE("dist2lu single row") {
    Matrix<long long> b(1, 3);
    b.at(0, 0) = 2;
    b.at(0, 1) = 0;
    b.at(0, 2) = 1;
    const RatMatrix x = dist2lu(b, 3);
    RatMatrix brat(1, 3);
    for (int j = 0; j < 3; ++j) brat.at(0, j) = b.at(0, j);
    const RatMatrix signs = sign_of(brat * x + RatMatrix(1, 1, Rational(-1)));
    CHECK(rational_rank(signs) == 1);
}

TEST_CASE("dist2lu rejects bad input") {
    Matrix<long long> dup(2, 2);
    dup.at(0, 0) = 1;
    dup.at(0, 1) = 0;
    dup.at(1, 0) = 1;
    dup.at(1, 1) = 0;
    CHECK_THROWS_AS(dist2lu(dup, 2), std::invalid_argument);

    Matrix<long long> oob(1, 1);
    oob.at(0, 0) = 5;
    CHECK_THROWS_AS(dist2lu(oob, 3), std::invalid_argument);
}

TEST_CASE("dist2lu rank property on random matrices") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const int s = rng.uniform_int(1, 6);
        const int t = rng.uniform_int(1, 6);
        const long long n = rng.uniform_int(2, 9);
        Matrix<long long> b(s, t);
        bool distinct = false;
        while (!distinct) {
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < t; ++j)
                    b.at(i, j) = rng.uniform_int(0, static_cast<int>(n) - 1);
            distinct = true;
            for (int i = 0; i < s && distinct; ++i)
                for (int j = i + 1; j < s && distinct; ++j) {
                    bool eq = true;
                    for (int c = 0; c < t; ++c) eq = eq && b.at(i, c) == b.at(j, c);
                    if (eq) distinct = false;
                }
        }
        const RatMatrix x = dist2lu(b, n);
        RatMatrix brat(s, t);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < t; ++j) brat.at(i, j) = b.at(i, j);
        const RatMatrix signs = sign_of(brat * x + RatMatrix(s, s, Rational(-1)));
        CHECK(rational_rank(signs) == s);
    }
}

TEST_CASE("uncolored simulation step") {
    SUBCASE("uniform start yields the degree partition") {
        Rng rng(7);
        const Graph g = random_graph(rng, 8, 0.4, 1);
        const UncoloredStep step = simulate_step_uncolored(g, ones(8, 1));
        std::vector<int> degs(8);
        for (int v = 0; v < 8; ++v) degs[v] = g.degree(v);
        CHECK(equivalent(rational_row_partition(step.f_next), canonicalize(degs)));
    }
    SUBCASE("triangle + C4 from J keeps a single distinct row") {
        const UncoloredStep step = simulate_step_uncolored(fixtures::triangle_c4(), ones(7, 1));
        CHECK(rational_row_partition(step.f_next).num_colors() == 1);
    }
    SUBCASE("star from J: two distinct rows, linearly independent") {
        const UncoloredStep step = simulate_step_uncolored(fixtures::star(3), ones(4, 1));
        const Coloring classes = rational_row_partition(step.f_next);
        CHECK(classes.num_colors() == 2);
        CHECK(rational_rank(step.f_next) == 2);
    }
    SUBCASE("f_next literally equals sgn(A F W - J)") {
        Rng rng(9);
        const Graph g = random_graph(rng, 6, 0.5, 1);
        const UncoloredStep step = simulate_step_uncolored(g, ones(6, 1));
        const RatMatrix afw = adjacency_matrix(g) * ones(6, 1) * step.w;
        CHECK(step.f_next == sign_of(afw + RatMatrix(6, 6, Rational(-1))));
    }
    SUBCASE("output partition is the own-color-free refinement of the input") {
        Rng rng(11);
        for (int trial = 0; trial < 15; ++trial) {
            const int n = rng.uniform_int(2, 9);
            const Graph g = random_graph(rng, n, 0.4, rng.uniform_int(1, 2));
            ColoredSimulation sim = simulate_wl_colored(g, g.labels(), 0);
            RatMatrix f = sim.f0;
            const UncoloredStep step = simulate_step_uncolored(g, f);
            const Coloring expected = wl1_step_tilde(g, rational_row_partition(f));
            CHECK(equivalent(rational_row_partition(step.f_next), expected));
        }
    }
    SUBCASE("dependent distinct rows are rejected") {
        // Rows (1,0), (0,1), (1,1): distinct but linearly dependent.
        RatMatrix f(3, 2);
        f.at(0, 0) = 1;
        f.at(1, 1) = 1;
        f.at(2, 0) = 1;
        f.at(2, 1) = 1;
        const Graph g = fixtures::path(3);
        CHECK_THROWS_AS(simulate_step_uncolored(g, f), std::invalid_argument);
    }
}

TEST_CASE("colored simulation tracks color refinement exactly") {
    SUBCASE("uniform labels") {
        const Graph g = fixtures::triangle_c4();
        const ColoredSimulation sim = simulate_wl_colored(g, g.labels(), 4);
        const RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), 4);
        for (int t = 0; t <= 4; ++t)
            CHECK(equivalent(rational_row_partition(sim.traces[t]), wl.at_clamped(t)));
    }
    SUBCASE("discrete labels stay discrete") {
        const Graph g(4, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 2, 3});
        const ColoredSimulation sim = simulate_wl_colored(g, g.labels(), 4);
        for (const auto& f : sim.traces) CHECK(rational_row_partition(f).num_colors() == 4);
    }
    SUBCASE("random labeled graphs, full depth") {
        Rng rng(13);
        for (int trial = 0; trial < 25; ++trial) {
            const int n = rng.uniform_int(2, 10);
            const Graph g = random_graph(rng, n, rng.bernoulli(0.5) ? 0.3 : 0.5,
                                         rng.uniform_int(1, 3));
            const ColoredSimulation sim = simulate_wl_colored(g, g.labels(), n);
            const RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), n);
            for (int t = 0; t <= n; ++t)
                CHECK(equivalent(rational_row_partition(sim.traces[t]), wl.at_clamped(t)));
        }
    }
    SUBCASE("width stays within 2n") {
        Rng rng(15);
        const Graph g = random_graph(rng, 9, 0.4, 3);
        const ColoredSimulation sim = simulate_wl_colored(g, g.labels(), 9);
        for (const auto& f : sim.traces) CHECK(f.cols() <= 2 * 9);
    }
}

TEST_CASE("relu simulation") {
    SUBCASE("equivalence at every round, 2T layers, positive delta") {
        Rng rng(17);
        for (int trial = 0; trial < 15; ++trial) {
            const int n = rng.uniform_int(2, 9);
            const Graph g = random_graph(rng, n, rng.bernoulli(0.5) ? 0.3 : 0.5,
                                         rng.uniform_int(1, 3));
            const ReluSimulation sim = relu_simulation(g, g.labels(), n);
            const RefinementTrace wl = wl1_run(g, coloring_from_labels(g.labels()), n);
            CHECK(static_cast<int>(sim.traces.size()) == 2 * n + 1);
            for (const auto& round : sim.rounds) CHECK(sgn(round.delta) > 0);
            for (int t = 0; t <= n; ++t)
                CHECK(equivalent(rational_row_partition(sim.traces[2 * t]), wl.at_clamped(t)));
        }
    }
    SUBCASE("even layers are the sign trace shifted by J") {
        Rng rng(19);
        const Graph g = random_graph(rng, 7, 0.4, 2);
        const ColoredSimulation sign_sim = simulate_wl_colored(g, g.labels(), 7);
        const ReluSimulation relu_sim = relu_simulation(g, g.labels(), 7);
        const int label_width = sign_sim.f0.cols();
        for (int t = 1; t <= 7; ++t) {
            const RatMatrix& signed_f = sign_sim.traces[t];
            const RatMatrix& relu_f = relu_sim.traces[2 * t];
            REQUIRE(relu_f.cols() == signed_f.cols());
            for (int v = 0; v < 7; ++v)
                for (int c = 0; c < signed_f.cols(); ++c) {
                    const Rational expected = c < label_width
                                                  ? signed_f.at(v, c)
                                                  : signed_f.at(v, c) + 1;
                    CHECK(relu_f.at(v, c) == expected);
                }
        }
    }
    SUBCASE("exported layer weights replay the trace") {
        Rng rng(21);
        const Graph g = random_graph(rng, 8, 0.4, 2);
        const ReluSimulation sim = relu_simulation(g, g.labels(), 8);
        const RatMatrix a = adjacency_matrix(g);
        for (std::size_t round = 0; round < sim.rounds.size(); ++round) {
            const RatMatrix& even_in = sim.traces[2 * round];
            // Layer A: relu(A f W + J).
            RatMatrix pre = a * even_in * sim.rounds[round].layer_a_w2;
            RatMatrix odd(pre.rows(), pre.cols());
            for (int r = 0; r < pre.rows(); ++r)
                for (int c = 0; c < pre.cols(); ++c) {
                    Rational e = pre.at(r, c) + 1;
                    odd.at(r, c) = sgn(e) > 0 ? e : Rational(0);
                }
            CHECK(odd == sim.traces[2 * round + 1]);
            // Layer B: relu(-(2/delta) f + 2J), then the fixed one-hot block.
            const Rational scale = Rational(-2) / sim.rounds[round].delta;
            RatMatrix even(odd.rows(), odd.cols());
            for (int r = 0; r < odd.rows(); ++r)
                for (int c = 0; c < odd.cols(); ++c) {
                    Rational e = scale * odd.at(r, c) + 2;
                    even.at(r, c) = sgn(e) > 0 ? e : Rational(0);
                }
            CHECK(hconcat(sim.f0, even) == sim.traces[2 * round + 2]);
        }
    }
}
